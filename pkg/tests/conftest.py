import numpy as np
import pytest

from bagofpaths.graph import build_graph
from bagofpaths.synthetic import path_graph, random_strongly_connected, random_undirected

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion():
    def record(label, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] {label}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


@pytest.fixture
def two_node():
    return build_graph([[0, 1], [1, 0]])


@pytest.fixture
def path3():
    return path_graph(3)


def small_suite():
    """20 strongly connected directed graphs with 2..5 nodes."""
    rng = np.random.default_rng(20240101)
    return [random_strongly_connected(rng, int(rng.integers(2, 6))) for _ in range(20)]


def metric_suite():
    """50 (graph, theta) pairs, n <= 30, theta in [0.05, 5]."""
    rng = np.random.default_rng(7)
    out = []
    for _ in range(50):
        n = int(rng.integers(3, 31))
        g = random_strongly_connected(rng, n, density=float(rng.uniform(0.05, 0.4)))
        out.append((g, float(rng.uniform(0.05, 5.0))))
    return out


def undirected_suite():
    """10 connected undirected graphs, 5..15 nodes, integer costs in [1, 5]."""
    rng = np.random.default_rng(12345)
    return [random_undirected(rng, int(rng.integers(5, 16))) for _ in range(10)]
