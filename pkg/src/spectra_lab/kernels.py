"""Backend selector for the cylinder-expansion kernels.

The compiled lane is preferred when the extension built; setting
SPECTRA_LAB_PURE_PYTHON=1 forces the vectorized fallback.
"""
from __future__ import annotations

import os

if os.environ.get("SPECTRA_LAB_PURE_PYTHON"):
    from . import _pykernels as _impl
else:
    try:
        from . import _cykernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernels as _impl

BACKEND = _impl.BACKEND
expand_affine = _impl.expand_affine
expand_moebius = _impl.expand_moebius

__all__ = ["BACKEND", "expand_affine", "expand_moebius"]
