"""Reference computations that do not go through the fundamental matrix.

These are deliberately naive: walk enumeration, Floyd-Warshall, and one
linear solve per target for first-passage costs. They exist to check the
closed-form engine, not to be fast.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DepthLimitExceeded
from .graph import reference_transitions

MAX_DEPTH = 20


@dataclass(frozen=True)
class PathEnumeration:
    source: int
    target: int
    t_max: int
    mass: float
    count: int


def enumerate_path_mass(g, theta, i, j, t_max, hitting=False):
    """Sum ``pi_ref(path) * exp(-theta * cost(path))`` over walks i -> j of length <= t_max.

    Walks are expanded depth first from ``i``; a walk contributes every time
    it stands on ``j`` (including the zero-length walk when ``i == j``). With
    ``hitting=True`` a walk stops at its first arrival at ``j``. Sub-walk
    totals are memoized on (node, remaining depth), which is what keeps
    depth 15-20 tractable; no walk is dropped or counted twice.
    """
    if t_max > MAX_DEPTH:
        raise DepthLimitExceeded(f"t_max={t_max} exceeds the enumeration cap of {MAX_DEPTH}")
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    p_ref = reference_transitions(g)
    succ = [
        [(v, float(p_ref[u, v]), float(g.costs[u, v])) for v in np.flatnonzero(g.arcs[u])]
        for u in range(g.n)
    ]

    @lru_cache(maxsize=None)
    def walk(u, depth, started):
        # (mass, count) of the walks continuing from u with `depth` steps left
        if u == j and (started or not hitting):
            mass, count = 1.0, 1
            if hitting:
                return mass, count
        else:
            mass, count = 0.0, 0
        if depth == 0:
            return mass, count
        for v, p, c in succ[u]:
            sub_mass, sub_count = walk(v, depth - 1, True)
            mass += p * np.exp(-theta * c) * sub_mass
            count += sub_count
        return mass, count

    if hitting and i == j:
        return PathEnumeration(i, j, t_max, 1.0, 1)
    mass, count = walk(i, t_max, False)
    return PathEnumeration(i, j, t_max, float(mass), int(count))


def shortest_path_matrix(g):
    """All-pairs minimal walk cost (Floyd-Warshall); +inf where unreachable."""
    d = np.array(g.costs, dtype=float)
    np.fill_diagonal(d, 0.0)
    for k in range(g.n):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


def _reaches(arcs, k):
    """Boolean mask of nodes with a directed path to k."""
    seen = np.zeros(arcs.shape[0], dtype=bool)
    seen[k] = True
    frontier = [k]
    while frontier:
        v = frontier.pop()
        for u in np.flatnonzero(arcs[:, v] & ~seen):
            seen[u] = True
            frontier.append(u)
    return seen


def first_passage_cost(g, k):
    """Expected cost of the natural random walk from each node to its first visit of ``k``.

    Solves ``m_i = sum_j p_ij (c_ij + m_j)``, ``m_k = 0``. A node whose walk
    may wander somewhere ``k`` cannot be reached from gets ``+inf``; the rest
    are solved on the remaining subsystem.
    """
    n = g.n
    p = reference_transitions(g)
    arcs = np.array(g.arcs)
    arcs[k, :] = False  # absorbing target
    dead = ~_reaches(arcs, k)
    # anything that can reach a dead node has infinite expected cost
    doomed = np.zeros(n, dtype=bool)
    for d in np.flatnonzero(dead):
        doomed |= _reaches(arcs, d)
    finite = ~doomed
    m = np.full(n, np.inf)
    m[k] = 0.0
    idx = np.flatnonzero(finite & (np.arange(n) != k))
    if len(idx):
        step_cost = np.where(g.arcs, p * np.where(g.arcs, g.costs, 0.0), 0.0).sum(axis=1)
        a = np.eye(len(idx)) - p[np.ix_(idx, idx)]
        m[idx] = np.linalg.solve(a, step_cost[idx])
    return m


def commute_cost_matrix(g):
    """``CC[i, j] = m_ij + m_ji`` from first-passage costs."""
    m = np.column_stack([first_passage_cost(g, k) for k in range(g.n)])
    cc = m + m.T
    np.fill_diagonal(cc, 0.0)
    return cc
