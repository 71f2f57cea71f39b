"""Surprisal and potential distances between nodes.

Both come from the hitting-path weights ``z^h_ij``. The potential is
``phi(i, j) = -log(z^h_ij) / theta`` and the potential distance is its
symmetrization. The surprisal distance is the symmetrized ``-log P_h``.
For large theta the dense ``Z`` underflows, so potentials can also be
obtained by a log-domain fixed point that generalizes Bellman-Ford.
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import logsumexp

from .errors import NoConvergence, NotUndirected
from .graph import Graph
from .tsv import write_matrix

Measure = Literal["surprisal", "potential"]

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITERS = 100_000
# theta * (min arc cost) beyond which the CLI switches to the recurrence
RECURRENCE_THRESHOLD = 500.0


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    d: np.ndarray
    measure: Measure
    theta: float

    def write(self, fh):
        write_matrix(fh, self.d, measure=self.measure, theta=repr(self.theta))


def _neg_log(x):
    out = np.full(x.shape, np.inf)
    pos = x > 0
    out[pos] = -np.log(x[pos])
    return out


def _symmetrize(half):
    d = (half + half.T) / 2
    np.fill_diagonal(d, 0.0)
    return d


def potential_matrix(m):
    """``Phi = -log(Z_h) / theta`` elementwise; +inf where ``z^h_ij`` is 0."""
    return _neg_log(m.z_h) / m.theta


def potential_distance(m):
    return DistanceMatrix(_symmetrize(potential_matrix(m)), "potential", m.theta)


def surprisal_distance(m):
    z_h = m.z_h
    log_partition = np.log(z_h.sum())
    # -log P_h = -log z^h_ij + log Z_h
    return DistanceMatrix(_symmetrize(_neg_log(z_h) + log_partition), "surprisal", m.theta)


def distances_from_potentials(phi, theta, measure):
    """Distance matrix from a potential matrix, staying in the log domain.

    ``log Z_h`` is recovered as ``logsumexp(-theta * Phi)``, so this works
    for potentials produced by the recurrence at any theta.
    """
    if measure == "potential":
        return DistanceMatrix(_symmetrize(phi), "potential", theta)
    log_partition = logsumexp(-theta * phi)
    return DistanceMatrix(_symmetrize(theta * phi + log_partition), "surprisal", theta)


def _log_arc_weights(g, p_ref):
    out = np.full(p_ref.shape, -np.inf)
    arcs = g.arcs
    out[arcs] = np.log(p_ref[arcs])
    return out


def potential_to_target(m, k, tolerance=DEFAULT_TOL, max_iters=DEFAULT_MAX_ITERS):
    """Potentials ``phi(i, k)`` of every node towards ``k`` by fixed-point iteration.

    Iterates ``phi(i,k) = -1/theta log sum_j p_ij exp(-theta (c_ij + phi(j,k)))``
    from ``phi = +inf`` (``phi(k,k) = 0``) with log-sum-exp, until the
    sup-norm change drops below ``tolerance``. Uses only ``P_ref``, the
    costs and theta, never ``Z``, so it is immune to underflow.
    """
    return _potential_to_target(m.graph, m.p_ref, m.theta, k, tolerance, max_iters)


def _potential_to_target(g, p_ref, theta, k, tolerance, max_iters):
    n = g.n
    if not 0 <= k < n:
        raise IndexError(f"node {k} out of range for a graph with {n} nodes")
    log_p = _log_arc_weights(g, p_ref)
    log_p[k, :] = -np.inf  # absorbing target
    costs = np.where(g.arcs, g.costs, 0.0)
    base = log_p - theta * costs
    phi = np.full(n, np.inf)
    phi[k] = 0.0
    change = np.inf
    with np.errstate(invalid="ignore", divide="ignore"):
        for _ in range(max_iters):
            # log z^h_j = -theta phi_j; -inf where phi_j is +inf
            terms = base + (-theta * phi)[None, :]
            new = -logsumexp(terms, axis=1) / theta
            new[k] = 0.0
            same_support = np.array_equal(np.isfinite(new), np.isfinite(phi))
            fin = np.isfinite(new)
            change = float(np.max(np.abs(new[fin] - phi[fin]))) if same_support and fin.any() else np.inf
            phi = new
            if change < tolerance:
                return phi
    raise NoConvergence(max_iters, phi, change, target=k)


def potentials_by_recurrence(m, tolerance=DEFAULT_TOL, max_iters=DEFAULT_MAX_ITERS):
    """Full potential matrix, one column per target node, via :func:`potential_to_target`."""
    return np.column_stack(
        [potential_to_target(m, k, tolerance, max_iters) for k in range(m.n)]
    )


def prefers_recurrence(g, theta):
    finite = g.costs[g.arcs]
    positive = finite[finite > 0]
    if positive.size == 0:
        return False
    return theta * positive.min() > RECURRENCE_THRESHOLD


@dataclass(frozen=True)
class LimitRow:
    theta: float
    shortest_path_error: float
    commute_cost_error: float


def distance_limits_report(g, thetas, method="dense"):
    """Compare the potential distance with its two limits for each theta.

    Each row holds ``max |D_phi - SP|`` and ``max |2 D_phi - CC|`` over node
    pairs. ``method`` selects how potentials are computed: ``"dense"``
    (through ``Z``), ``"recurrence"`` or ``"auto"``.
    """
    from .engine import build_model
    from .oracle import commute_cost_matrix, shortest_path_matrix

    if not isinstance(g, Graph):
        raise TypeError("expected a Graph")
    if not g.is_undirected():
        raise NotUndirected(*g.asymmetric_pair())
    sp = shortest_path_matrix(g)
    cc = commute_cost_matrix(g)
    off = ~np.eye(g.n, dtype=bool) & np.isfinite(sp)
    rows = []
    for theta in thetas:
        m = build_model(g, theta)
        use_rec = method == "recurrence" or (method == "auto" and prefers_recurrence(g, theta))
        if use_rec:
            d = distances_from_potentials(potentials_by_recurrence(m), m.theta, "potential").d
        else:
            d = potential_distance(m).d
        rows.append(
            LimitRow(
                float(theta),
                float(np.max(np.abs(d - sp)[off], initial=0.0)),
                float(np.max(np.abs(2 * d - cc)[off], initial=0.0)),
            )
        )
    return rows
