import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bagofpaths.distance import (
    distance_limits_report,
    distances_from_potentials,
    potential_distance,
    potential_matrix,
    potential_to_target,
    potentials_by_recurrence,
    prefers_recurrence,
    surprisal_distance,
)
from bagofpaths.engine import UnderflowWarning, build_model, hitting_probabilities
from bagofpaths.errors import NoConvergence, NotUndirected
from bagofpaths.graph import build_graph
from bagofpaths.oracle import commute_cost_matrix
from bagofpaths.synthetic import barbell, path_graph, random_strongly_connected, random_undirected


def check_metric(d, slack=1e-9):
    n = d.shape[0]
    assert np.all(d >= 0)
    assert np.all(np.diag(d) == 0)
    assert np.all(d[~np.eye(n, dtype=bool)] > 0)
    assert np.array_equal(d, d.T)
    with np.errstate(invalid="ignore"):
        via = np.min(d[:, :, None] + d[None, :, :], axis=1)
    fin = np.isfinite(d)
    assert np.all(d[fin] <= via[fin] + slack)


def test_two_node_surprisal(two_node):
    d = surprisal_distance(build_model(two_node, 1.0))
    expected = -math.log(math.exp(-1) / (2 + 2 * math.exp(-1)))
    assert d.d[0, 1] == pytest.approx(expected, abs=1e-12)
    assert d.d[0, 0] == d.d[1, 1] == 0.0
    assert d.measure == "surprisal"


def test_disconnected_components_are_infinitely_far():
    g = build_graph([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    m = build_model(g, 1.0)
    for d in (surprisal_distance(m), potential_distance(m)):
        assert np.isinf(d.d[0, 2]) and np.isinf(d.d[1, 3])
        assert np.isfinite(d.d[0, 1])


def test_one_way_reachability_gives_infinity():
    # 0 <-> 1 -> 2 <-> 3: 2 cannot reach 0
    a = np.zeros((4, 4))
    a[0, 1] = a[1, 0] = a[1, 2] = a[2, 3] = a[3, 2] = 1
    d = potential_distance(build_model(build_graph(a), 1.0)).d
    assert np.isinf(d[0, 2])
    assert np.isfinite(d[0, 1]) and np.isfinite(d[2, 3])


@pytest.mark.parametrize("theta", [1e-4, 0.3, 1.0, 20.0])
def test_two_node_potential_is_one(two_node, theta):
    d = potential_distance(build_model(two_node, theta))
    assert d.d[0, 1] == pytest.approx(1.0, abs=1e-12)


def test_three_node_path_large_theta(path3):
    d = potential_distance(build_model(path3, 20.0)).d[0, 2]
    assert 2.0 <= d <= 2 + math.log(2) / 20 + 0.05


def test_affine_relation_between_measures():
    rng = np.random.default_rng(8)
    for _ in range(10):
        m = build_model(random_strongly_connected(rng, int(rng.integers(3, 15))), float(rng.uniform(0.1, 3)))
        dh, dp = surprisal_distance(m).d, potential_distance(m).d
        log_zh = math.log(hitting_probabilities(m).partition)
        off = ~np.eye(m.n, dtype=bool)
        np.testing.assert_allclose(dp[off], (dh[off] - log_zh) / m.theta, rtol=0, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 20), theta=st.floats(0.05, 5.0))
def test_metric_axioms(seed, n, theta):
    m = build_model(random_strongly_connected(np.random.default_rng(seed), n, 0.2), theta)
    check_metric(surprisal_distance(m).d)
    check_metric(potential_distance(m).d)


def test_graph_geodetic_on_barbell():
    g = barbell(4)
    hub, i, k = g.n - 1, 0, 7
    d = potential_distance(build_model(g, 1.0)).d
    assert abs(d[i, k] - (d[i, hub] + d[hub, k])) <= 1e-9

    a = np.array(g.affinities)
    a[i, k] = a[k, i] = 1.0
    d = potential_distance(build_model(build_graph(a), 1.0)).d
    assert d[i, hub] + d[hub, k] - d[i, k] >= 1e-6


def test_potential_to_target_examples(two_node, path3):
    np.testing.assert_allclose(potential_to_target(build_model(two_node, 1.0), 1), [1.0, 0.0], atol=1e-12)
    phi = potential_to_target(build_model(path3, 40.0), 2)
    assert phi[2] == 0.0
    assert abs(phi[0] - 2.0) <= 0.02


def test_recurrence_matches_dense_columns():
    rng = np.random.default_rng(21)
    for _ in range(8):
        g = random_strongly_connected(rng, int(rng.integers(2, 15)), 0.3)
        m = build_model(g, float(rng.uniform(0.2, 3)))
        phi = potential_matrix(m)
        rec = potentials_by_recurrence(m, tolerance=1e-12)
        fin = np.isfinite(phi)
        assert np.array_equal(fin, np.isfinite(rec))
        assert np.max(np.abs(phi[fin] - rec[fin])) <= 10 * 1e-12 / (1 - m.w.sum(axis=1).max()) + 1e-10


def test_recurrence_survives_underflow(path3):
    # exp(-2000) underflows, yet the log-domain potentials are exact
    with pytest.warns(UnderflowWarning):
        m = build_model(path3, 1000.0)
    phi = potential_to_target(m, 2)
    assert phi[0] == pytest.approx(2.0 - math.log(0.5) / 1000, abs=1e-12)
    d = distances_from_potentials(potentials_by_recurrence(m), 1000.0, "potential")
    assert d.d[0, 2] == pytest.approx(2.0 + math.log(2) / 1000, abs=1e-12)


def test_recurrence_surprisal_matches_dense():
    m = build_model(random_strongly_connected(np.random.default_rng(2), 8), 1.3)
    rec = distances_from_potentials(potentials_by_recurrence(m), m.theta, "surprisal").d
    np.testing.assert_allclose(rec, surprisal_distance(m).d, atol=1e-9)


def test_no_convergence_carries_last_iterate():
    m = build_model(random_strongly_connected(np.random.default_rng(1), 10), 1e-3)
    with pytest.raises(NoConvergence) as exc:
        potential_to_target(m, 0, tolerance=1e-14, max_iters=5)
    assert exc.value.max_iters == 5
    assert exc.value.last.shape == (10,)
    assert exc.value.last[0] == 0.0


def test_prefers_recurrence_threshold(path3):
    assert not prefers_recurrence(path3, 400.0)
    assert prefers_recurrence(path3, 600.0)


def test_limits_report_two_node(two_node):
    for row in distance_limits_report(two_node, [0.001, 1, 20]):
        assert row.shortest_path_error < 1e-9
        assert row.commute_cost_error < 1e-9


def test_limits_report_path_graph(path3):
    (row,) = distance_limits_report(path3, [1e-4])
    cc = commute_cost_matrix(path3)[0, 2]
    d = potential_distance(build_model(path3, 1e-4)).d[0, 2]
    assert abs(2 * d - cc) < 1e-3 * cc
    r10, r20 = distance_limits_report(path3, [10, 20])
    assert 0.3 <= r20.shortest_path_error / r10.shortest_path_error <= 0.7


def test_limits_report_methods_agree():
    g = random_undirected(np.random.default_rng(0), 8)
    dense = distance_limits_report(g, [1.0, 5.0], method="dense")
    rec = distance_limits_report(g, [1.0, 5.0], method="recurrence")
    for a, b in zip(dense, rec):
        assert a.shortest_path_error == pytest.approx(b.shortest_path_error, abs=1e-9)


def test_commute_limit_is_first_order_in_theta():
    # 2 D_phi = CC - O(theta): the residual shrinks tenfold per decade of theta
    g = random_undirected(np.random.default_rng(12345), 10)
    e4, e5 = (r.commute_cost_error for r in distance_limits_report(g, [1e-4, 1e-5]))
    assert e5 / e4 == pytest.approx(0.1, rel=0.02)


def test_limits_report_refuses_directed():
    g = random_strongly_connected(np.random.default_rng(0), 5)
    with pytest.raises(NotUndirected):
        distance_limits_report(g, [1.0])


def test_directed_graphs_still_get_distances():
    g = random_strongly_connected(np.random.default_rng(0), 6)
    d = potential_distance(build_model(g, 1.0)).d
    assert np.array_equal(d, d.T)
