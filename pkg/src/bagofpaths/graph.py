"""Weighted directed graphs with per-arc affinity and cost.

An arc (i, j) exists iff ``affinities[i, j] > 0``; its cost is finite
exactly then. Missing arcs carry cost ``+inf``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DuplicateArc, NegativeEntry, ParseError, ShapeMismatch, ZeroOutDegree
from .tsv import format_value


@dataclass(frozen=True, eq=False)
class Graph:
    affinities: np.ndarray
    costs: np.ndarray

    @property
    def n(self):
        return self.affinities.shape[0]

    @property
    def arcs(self):
        """Boolean adjacency mask."""
        return self.affinities > 0

    def is_undirected(self):
        return bool(
            np.array_equal(self.affinities, self.affinities.T)
            and np.array_equal(self.costs, self.costs.T)
        )

    def asymmetric_pair(self):
        """First (i, j) whose arc differs from (j, i), or None."""
        bad = (self.affinities != self.affinities.T) | (self.costs != self.costs.T)
        idx = np.argwhere(bad)
        return tuple(int(v) for v in idx[0]) if len(idx) else None


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def build_graph(affinities, costs=None):
    """Validate an affinity matrix (and optional cost matrix) into a Graph.

    When ``costs`` is omitted each arc costs ``1 / a_ij``. Supplied costs
    must be finite exactly on the arcs; any value off the arcs is replaced by
    ``+inf``. Self-loops are allowed, zero-cost arcs too.
    """
    a = np.array(affinities, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ShapeMismatch(f"affinities must be a non-empty square matrix, got shape {a.shape}")
    if np.isnan(a).any() or np.isinf(a).any():
        i, j = np.argwhere(~np.isfinite(a))[0]
        raise ShapeMismatch(f"affinity on arc ({i}, {j}) is not finite")
    neg = np.argwhere(a < 0)
    if len(neg):
        i, j = neg[0]
        raise NegativeEntry("affinity", int(i), int(j), a[i, j])
    empty = np.flatnonzero(a.sum(axis=1) <= 0)
    if len(empty):
        raise ZeroOutDegree(int(empty[0]))
    arcs = a > 0

    if costs is None:
        c = np.full_like(a, np.inf)
        c[arcs] = 1.0 / a[arcs]
    else:
        c = np.array(costs, dtype=float)
        if c.shape != a.shape:
            raise ShapeMismatch(f"costs shape {c.shape} differs from affinities shape {a.shape}")
        if np.isnan(c).any():
            i, j = np.argwhere(np.isnan(c))[0]
            raise ShapeMismatch(f"cost on arc ({i}, {j}) is NaN")
        neg = np.argwhere(c < 0)
        if len(neg):
            i, j = neg[0]
            raise NegativeEntry("cost", int(i), int(j), c[i, j])
        bad = np.argwhere(arcs & np.isinf(c))
        if len(bad):
            i, j = bad[0]
            raise ShapeMismatch(f"arc ({i}, {j}) has positive affinity but infinite cost")
        c = np.where(arcs, c, np.inf)
    return Graph(_frozen(a), _frozen(c))


def reference_transitions(g):
    """Row-normalized affinities: the natural random walk on ``g``."""
    a = g.affinities
    return a / a.sum(axis=1, keepdims=True)


def load_edge_list(stream):
    """Parse ``i j a_ij [c_ij]`` lines (0-based ids, ``#`` comments) into a Graph."""
    entries = {}
    with_cost = []
    max_id = -1
    for line_no, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) not in (3, 4):
            raise ParseError(line_no, raw, f"expected 3 or 4 fields, got {len(toks)}")
        try:
            i, j = int(toks[0]), int(toks[1])
            vals = [float(t) for t in toks[2:]]
        except ValueError:
            raise ParseError(line_no, raw, "non-numeric field") from None
        if i < 0 or j < 0:
            raise ParseError(line_no, raw, "node ids must be non-negative")
        if (i, j) in entries:
            raise DuplicateArc(i, j, line_no)
        if vals[0] <= 0:
            if vals[0] < 0:
                raise NegativeEntry("affinity", i, j, vals[0])
            raise ParseError(line_no, raw, "affinity must be positive")
        entries[(i, j)] = (line_no, vals)
        with_cost.append(len(vals) == 2)
        max_id = max(max_id, i, j)
    if max_id < 0:
        raise ParseError(0, "", "no arcs in input")
    if any(with_cost) and not all(with_cost):
        raise ParseError(0, "", "cost column must be present on every line or on none")

    n = max_id + 1
    a = np.zeros((n, n))
    c = np.full((n, n), np.inf) if all(with_cost) else None
    for (i, j), (_, vals) in entries.items():
        a[i, j] = vals[0]
        if c is not None:
            c[i, j] = vals[1]
    return build_graph(a, c)


def write_edge_list(g, fh):
    """Serialize ``g`` as an edge list with an explicit cost column."""
    for i, j in np.argwhere(g.arcs):
        fh.write(f"{i} {j} {format_value(g.affinities[i, j])} {format_value(g.costs[i, j])}\n")
