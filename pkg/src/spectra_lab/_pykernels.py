"""Vectorized lane of the directed-rounding cylinder kernels.

Every floating-point operation is followed by a one-ulp outward step via
nextafter, so computed bounds always bracket the exact real values. The
compiled lane in _cykernels is a scalar twin of these loops; the two must
stay bit-identical, which pins the exact order of operations below.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"

__all__ = ["BACKEND", "expand_affine", "expand_moebius"]


def _dn(x):
    return np.nextafter(x, -np.inf)


def _up(x):
    return np.nextafter(x, np.inf)


def expand_affine(lo_lo, lo_hi, hi_lo, hi_hi, d_lo, d_hi, c0_lo, c0_hi, c1_lo, c1_hi):
    """Apply x -> c0 + c1*x to parent endpoint brackets, outward.

    The coefficients arrive as brackets of the exact rationals; c1 must not
    straddle zero. Returns the six child arrays (endpoint brackets and the
    accumulated |derivative| range).
    """
    if c1_lo > 0.0:
        src = (lo_lo, lo_hi, hi_lo, hi_hi)
    else:
        src = (hi_hi, hi_lo, lo_hi, lo_lo)
    x0, x1, x2, x3 = src
    nll = _dn(c0_lo + np.minimum(_dn(c1_lo * x0), _dn(c1_hi * x0)))
    nlh = _up(c0_hi + np.maximum(_up(c1_lo * x1), _up(c1_hi * x1)))
    nhl = _dn(c0_lo + np.minimum(_dn(c1_lo * x2), _dn(c1_hi * x2)))
    nhh = _up(c0_hi + np.maximum(_up(c1_lo * x3), _up(c1_hi * x3)))
    if c1_lo > 0.0:
        a_lo, a_hi = c1_lo, c1_hi
    else:
        a_lo, a_hi = -c1_hi, -c1_lo
    ndl = _dn(d_lo * a_lo)
    ndh = _up(d_hi * a_hi)
    return nll, nlh, nhl, nhh, ndl, ndh


def expand_moebius(lo_lo, lo_hi, hi_lo, hi_hi, d_lo, d_hi, a):
    """Apply the decreasing map x -> 1/(a + x), outward, for integer a >= 1."""
    nll = _dn(1.0 / _up(a + hi_hi))
    nlh = _up(1.0 / _dn(a + hi_lo))
    nhl = _dn(1.0 / _up(a + lo_hi))
    nhh = _up(1.0 / _dn(a + lo_lo))
    t = _dn(a + lo_lo)
    fmax = _up(1.0 / _dn(t * t))
    u = _up(a + hi_hi)
    fmin = _dn(1.0 / _up(u * u))
    ndl = _dn(d_lo * fmin)
    ndh = _up(d_hi * fmax)
    return nll, nlh, nhl, nhh, ndl, ndh
