"""Fundamental matrix and bag-of-paths probability matrices.

The killed random walk ``W = P_ref * exp(-theta C)`` (elementwise) has
fundamental matrix ``Z = (I - W)^-1``; ``z_ij`` is the total Boltzmann
weight of all walks from i to j. Column-normalizing by the diagonal gives
the hitting-path weights ``Z_h = Z Diag(Z)^-1``.
"""

import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg

from .errors import DegeneratePartition, NonPositiveTheta, SingularSystem
from .graph import Graph, reference_transitions
from .tsv import write_matrix

RESIDUAL_TOL = 1e-6

Kind = Literal["regular", "regular-nonzero", "hitting", "hitting-nonzero"]


class UnderflowWarning(RuntimeWarning):
    """Some arc weight exp(-theta c_ij) rounded to zero in double precision."""


@dataclass(frozen=True, eq=False)
class BopModel:
    graph: Graph
    theta: float
    p_ref: np.ndarray
    w: np.ndarray
    z: np.ndarray
    z_h: np.ndarray
    lu: tuple

    @property
    def n(self):
        return self.graph.n

    def solve(self, b):
        """Solve ``(I - W) x = b`` with the stored LU factors."""
        return scipy.linalg.lu_solve(self.lu, b)


@dataclass(frozen=True, eq=False)
class ProbabilityMatrix:
    p: np.ndarray
    kind: Kind
    partition: float
    theta: float

    def write(self, fh):
        write_matrix(fh, self.p, kind=self.kind, theta=repr(self.theta), partition=repr(self.partition))


def killed_walk_matrix(g, theta):
    """``W = P_ref o exp(-theta C)`` with exp(-theta * inf) taken as exactly 0."""
    p_ref = reference_transitions(g)
    arcs = g.arcs
    w = np.zeros_like(p_ref)
    w[arcs] = p_ref[arcs] * np.exp(-theta * g.costs[arcs])
    return p_ref, w


def _check_residual(i_minus_w, x, rhs, what):
    resid = np.max(np.abs(i_minus_w @ x - rhs))
    if not np.isfinite(resid) or resid > RESIDUAL_TOL:
        raise SingularSystem(f"{what}: I - W is numerically singular (residual {resid:.3g})")


def _factorize(i_minus_w, what):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(i_minus_w, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= pivots.max() * i_minus_w.shape[0] * 64 * np.finfo(float).eps:
        k = int(np.argmin(pivots))
        raise SingularSystem(f"{what}: I - W is rank deficient (pivot {k} is {pivots[k]:.3g})")
    return lu, piv


def build_model(g, theta):
    """Factorize ``I - W`` and materialize ``Z`` and ``Z_h`` for ``g`` at ``theta``.

    Raises :class:`SingularSystem` when ``I - W`` is not invertible, which
    happens when zero-cost cycles leave a row of ``W`` stochastic.
    """
    theta = float(theta)
    if not theta > 0 or not np.isfinite(theta):
        raise NonPositiveTheta(theta)
    p_ref, w = killed_walk_matrix(g, theta)
    lost = np.argwhere(g.arcs & (w == 0))
    if len(lost):
        i, j = lost[0]
        warnings.warn(
            f"{len(lost)} arc weight(s) underflowed to 0 at theta={theta:g} (first: arc ({i}, {j})); "
            "use the recurrence-based potentials for this regime",
            UnderflowWarning,
            stacklevel=2,
        )
    n = g.n
    eye = np.eye(n)
    i_minus_w = eye - w
    lu = _factorize(i_minus_w, f"theta={theta:g}")
    z = scipy.linalg.lu_solve(lu, eye)
    _check_residual(i_minus_w, z, eye, f"theta={theta:g}")
    z_h = z / np.diag(z)[None, :]
    np.fill_diagonal(z_h, 1.0)
    for a in (p_ref, w, z, z_h):
        a.setflags(write=False)
    return BopModel(g, theta, p_ref, w, z, z_h, lu)


def _normalize(numer, kind, theta):
    total = numer.sum()
    if not total > 0:
        raise DegeneratePartition(f"{kind} path mass sums to {total!r}; no paths to normalize")
    return ProbabilityMatrix(numer / total, kind, float(total), theta)


def regular_probabilities(m, include_zero_length=True):
    """Regular bag-of-paths probabilities ``Z / e'Ze`` (or ``(Z - I) / e'(Z - I)e``)."""
    if include_zero_length:
        return _normalize(m.z, "regular", m.theta)
    return _normalize(m.z - np.eye(m.n), "regular-nonzero", m.theta)


def hitting_probabilities(m, include_zero_length=True):
    """Bag-of-hitting-paths probabilities ``Z_h / e'Z_h e``, optionally without zero-length paths."""
    if include_zero_length:
        return _normalize(m.z_h, "hitting", m.theta)
    numer = m.z_h - np.eye(m.n)
    # diag(Z_h) is exactly 1 so the diagonal vanishes exactly
    np.fill_diagonal(numer, 0.0)
    return _normalize(numer, "hitting-nonzero", m.theta)


def hitting_column_direct(m, j):
    """Column ``j`` of ``(I - W^(-j))^-1`` where row ``j`` of ``W`` is zeroed.

    Solves one linear system from scratch, without using ``Z``; its entries
    equal ``z_ij / z_jj``.
    """
    n = m.n
    if not 0 <= j < n:
        raise IndexError(f"node {j} out of range for a graph with {n} nodes")
    w_minus = np.array(m.w)
    w_minus[j, :] = 0.0
    a = np.eye(n) - w_minus
    e_j = np.zeros(n)
    e_j[j] = 1.0
    lu = _factorize(a, f"absorbing node {j}")
    x = scipy.linalg.lu_solve(lu, e_j)
    _check_residual(a, x, e_j, f"absorbing node {j}")
    return x


def bounded_partition_check(m, t_max):
    """Return ``(e' (sum_{t<=t_max} W^t) e, e' Z e)``.

    The truncated series increases towards the full partition function.
    """
    n = m.n
    v = np.ones(n)
    total = float(n)
    for _ in range(int(t_max)):
        v = m.w @ v
        total += v.sum()
    return total, float(m.z.sum())
