"""Certified Perron-root enclosures for nonnegative sparse matrices.

Collatz-Wielandt bounds hold for any positive test vector, so each power
iteration yields a true two-sided enclosure; convergence of the bounds
needs primitivity, obtained by shifting each strongly connected block by
the identity (rho(B + I) = rho(B) + 1 for nonnegative B).  Floating-point
error is absorbed by an outward relative inflation derived from the row
fill-in, keeping the reported interval sound.
"""
from __future__ import annotations

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

__all__ = ["perron_enclosure", "ConvergenceError"]


class ConvergenceError(RuntimeError):
    """Enclosure failed to reach the requested width within the iteration cap."""


def _block_enclosure(block: sparse.csr_matrix, tol: float, max_iter: int) -> tuple[float, float]:
    n = block.shape[0]
    if block.nnz == 0:
        return 0.0, 0.0
    shifted = (block + sparse.identity(n, format="csr")).tocsr()
    k = int(np.diff(shifted.indptr).max())
    slack = (k + 4) * 2.0 ** -52  # covers dot-product and ratio rounding
    v = np.ones(n)
    lo_best, hi_best = 0.0, np.inf
    for _ in range(max_iter):
        w = shifted @ v
        ratios = w / v
        lo = float(ratios.min()) * (1.0 - slack)
        hi = float(ratios.max()) * (1.0 + slack)
        lo_best = max(lo_best, lo)
        hi_best = min(hi_best, hi)
        if hi_best - lo_best <= tol:
            return max(lo_best - 1.0, 0.0), max(hi_best - 1.0, 0.0)
        v = w / w.max()
    raise ConvergenceError(
        f"Perron enclosure width {hi_best - lo_best:.3e} > tol {tol:.3e} after {max_iter} iterations"
    )


def perron_enclosure(mat: sparse.spmatrix, tol: float = 1e-10, max_iter: int = 200_000) -> tuple[float, float]:
    """Certified [lo, hi] containing the spectral radius of a nonnegative matrix."""
    m = sparse.csr_matrix(mat, dtype=float)
    if m.shape[0] == 0:
        return 0.0, 0.0
    if (m.data < 0).any():
        raise ValueError("matrix must be nonnegative")
    ncomp, labels = csgraph.connected_components(m, directed=True, connection="strong")
    lo, hi = 0.0, 0.0
    for c in range(ncomp):
        idx = np.flatnonzero(labels == c)
        sub = m[np.ix_(idx, idx)].tocsr()
        if sub.nnz == 0:
            continue
        blo, bhi = _block_enclosure(sub, tol, max_iter)
        lo, hi = max(lo, blo), max(hi, bhi)
    return lo, hi
