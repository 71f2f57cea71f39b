import numpy as np
import pytest

from bagofpaths.cli import main
from bagofpaths.graph import write_edge_list
from bagofpaths.synthetic import stochastic_block_model
from bagofpaths.tsv import read_matrix


@pytest.fixture
def two_node_file(tmp_path):
    p = tmp_path / "two.edges"
    p.write_text("0 1 1\n1 0 1\n")
    return p


@pytest.fixture
def path_file(tmp_path):
    p = tmp_path / "path.edges"
    p.write_text("0 1 1\n1 0 1\n1 2 1\n2 1 1\n")
    return p


def _read(path):
    with open(path) as fh:
        return read_matrix(fh)


def test_dist_two_node(two_node_file, tmp_path):
    out = tmp_path / "d.tsv"
    assert main(["dist", str(two_node_file), "--theta", "1", "--measure", "potential", "--output", str(out)]) == 0
    d, meta = _read(out)
    assert meta == {"measure": "potential", "theta": "1.0"}
    assert np.array_equal(d, [[0, 1], [1, 0]])
    assert out.read_text().splitlines()[1] == "0\t1"


def test_dist_large_theta_uses_recurrence(path_file, tmp_path, capsys):
    out = tmp_path / "d.tsv"
    assert main(["dist", str(path_file), "--theta", "1000", "--output", str(out)]) == 0
    d, _ = _read(out)
    assert d[0, 2] == pytest.approx(2 + np.log(2) / 1000, abs=1e-12)
    assert "underflowed" in capsys.readouterr().err


@pytest.mark.parametrize("paths", ["hitting", "regular"])
@pytest.mark.parametrize("zero", ["include", "exclude"])
def test_probs_self_test(path_file, tmp_path, paths, zero, capsys):
    out = tmp_path / "p.tsv"
    args = ["probs", str(path_file), "--theta", "1", "--paths", paths, "--zero-paths", zero,
            "--self-test", "--output", str(out)]
    assert main(args) == 0
    p, meta = _read(out)
    assert abs(p.sum() - 1) <= 1e-10
    assert meta["kind"] == paths + ("" if zero == "include" else "-nonzero")
    assert float(meta["partition"]) > 0
    assert "self-test passed" in capsys.readouterr().err


def test_kernel_and_embed(path_file, tmp_path):
    k_out, e_out = tmp_path / "k.tsv", tmp_path / "e.tsv"
    assert main(["kernel", str(path_file), "--theta", "1", "--output", str(k_out)]) == 0
    k, _ = _read(k_out)
    assert np.max(np.abs(k.sum(axis=1))) <= 1e-8
    assert main(["embed", str(path_file), "--theta", "1", "--dims", "2", "--output", str(e_out)]) == 0
    e, meta = _read(e_out)
    assert e.shape == (3, 2) and meta["dims"] == "2"


def test_check_path_graph(path_file, capsys):
    assert main(["check", str(path_file), "--theta", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) >= 6
    assert all(line.startswith("PASS") for line in lines)


def test_identical_invocations_are_bit_identical(path_file, tmp_path):
    outs = []
    for name in ("a.tsv", "b.tsv"):
        out = tmp_path / name
        main(["embed", str(path_file), "--theta", "0.7", "--dims", "3", "--output", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_ssl_command(tmp_path):
    g, y = stochastic_block_model(np.random.default_rng(0), [30, 30], 0.3, 0.01)
    edges, labels = tmp_path / "g.edges", tmp_path / "labels.txt"
    with open(edges, "w") as fh:
        write_edge_list(g, fh)
    labels.write_text("".join(f"{i} {c}\n" for i, c in enumerate(y)))
    out = tmp_path / "report.tsv"
    assert main(["ssl", str(edges), "--labels", str(labels), "--seed", "1", "--labeling-rate", "0.3", "--output", str(out)]) == 0
    rec = out.read_text().splitlines()
    assert len(rec) == 2 and float(rec[1].split("\t")[0]) >= 0.8
    assert len((tmp_path / "report.tsv.folds.tsv").read_text().splitlines()) == 11


def test_validation_errors_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.edges"
    bad.write_text("0 1 1\n0 1 2\n")
    assert main(["dist", str(bad), "--theta", "1"]) == 1
    assert "line 2" in capsys.readouterr().err
    assert main(["dist", str(tmp_path / "missing.edges"), "--theta", "1"]) == 1
    bad.write_text("0 1 1\n1 0 1\n")
    assert main(["dist", str(bad), "--theta", "-1"]) == 1


def test_numerical_failure_exit_2(tmp_path, capsys):
    zero = tmp_path / "zero.edges"
    zero.write_text("0 1 1 0\n1 0 1 0\n")
    assert main(["dist", str(zero), "--theta", "1"]) == 2
    assert "rank deficient" in capsys.readouterr().err


def test_disconnected_kernel_names_pair(tmp_path, capsys):
    g = tmp_path / "two_parts.edges"
    g.write_text("0 1 1\n1 0 1\n2 3 1\n3 2 1\n")
    assert main(["kernel", str(g), "--theta", "1"]) == 1
    assert "nodes 0 and 2" in capsys.readouterr().err


def test_ssl_rejects_tiny_labeled_pool(tmp_path, capsys):
    g, y = stochastic_block_model(np.random.default_rng(0), [30, 30], 0.3, 0.01)
    edges, labels = tmp_path / "g.edges", tmp_path / "labels.txt"
    with open(edges, "w") as fh:
        write_edge_list(g, fh)
    labels.write_text("".join(f"{i} {c}\n" for i, c in enumerate(y)))
    assert main(["ssl", str(edges), "--labels", str(labels)]) == 1
    assert "at least 5 required" in capsys.readouterr().err
