"""Centered kernels from distance matrices and their spectral embeddings."""

from dataclasses import dataclass

import numpy as np

from .errors import InfiniteDistance
from .tsv import write_matrix


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    k: np.ndarray
    source_measure: str
    psd_clipped: bool = False

    def write(self, fh, theta=None):
        meta = {"measure": self.source_measure, "psd_clipped": str(self.psd_clipped).lower()}
        if theta is not None:
            meta["theta"] = repr(theta)
        write_matrix(fh, self.k, **meta)


@dataclass(frozen=True, eq=False)
class Embedding:
    vectors: np.ndarray
    eigenvalues: np.ndarray
    measure: str

    @property
    def dims(self):
        return self.vectors.shape[1]

    def write(self, fh):
        write_matrix(fh, self.vectors, dims=self.dims, measure=self.measure)


def center(a):
    """``H a H`` with ``H = I - ee'/n``."""
    a = a - a.mean(axis=0, keepdims=True)
    return a - a.mean(axis=1, keepdims=True)


def _exact_sym(a):
    return (a + a.T) / 2


def distance_to_kernel(d, clip_negative=False):
    """``K = -1/2 H D^(2) H`` from a :class:`DistanceMatrix` (squared internally).

    With ``clip_negative`` the negative eigenvalues of ``K`` are set to zero.
    """
    dist = np.asarray(d.d, dtype=float)
    bad = np.argwhere(~np.isfinite(dist))
    if len(bad):
        raise InfiniteDistance(int(bad[0][0]), int(bad[0][1]))
    k = _exact_sym(-0.5 * center(dist**2))
    if clip_negative:
        vals, vecs = np.linalg.eigh(k)
        k = _exact_sym((vecs * np.clip(vals, 0.0, None)) @ vecs.T)
    return KernelMatrix(k, d.measure, clip_negative)


def top_eigenvectors(k, dims):
    """The ``dims`` leading unit eigenvectors of ``K``, as columns.

    Signs are fixed so that the first entry of each vector that is not
    numerically zero is positive.
    """
    mat = k.k if isinstance(k, KernelMatrix) else np.asarray(k)
    n = mat.shape[0]
    if not 1 <= dims <= n:
        raise ValueError(f"dims must be in [1, {n}], got {dims}")
    vals, vecs = np.linalg.eigh(mat)
    order = np.argsort(-vals, kind="stable")[:dims]
    vals, vecs = vals[order], vecs[:, order]
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    for c in range(dims):
        col = vecs[:, c]
        nz = np.flatnonzero(np.abs(col) > 1e-10)
        if len(nz) and col[nz[0]] < 0:
            vecs[:, c] = -col
    measure = k.source_measure if isinstance(k, KernelMatrix) else "unknown"
    return Embedding(vecs, vals, measure)
