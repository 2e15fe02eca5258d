"""Kernel backend selection.

Prefers the compiled Cython extension; falls back to the numpy
implementations when the extension is missing or QCLUST_PURE_PYTHON is set
to a non-empty value. `BACKEND` names the active choice ("compiled" or
"fallback").
"""
from __future__ import annotations

import os

from . import fallback

if os.environ.get("QCLUST_PURE_PYTHON"):
    _impl = fallback
    BACKEND = "fallback"
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = fallback
        BACKEND = "fallback"

max_pairwise_distance = _impl.max_pairwise_distance
xor_fold_permutation = _impl.xor_fold_permutation

__all__ = ["BACKEND", "fallback", "max_pairwise_distance", "xor_fold_permutation"]
