"""Select the kernel implementation at import time.

The compiled ``_kernels`` extension is preferred. Setting the environment
variable ``LUCKMETER_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
from __future__ import annotations

import os

from . import _fallback

if os.environ.get("LUCKMETER_PURE_PYTHON", "").strip() not in ("", "0"):
    kernels = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        kernels = _fallback
        BACKEND = "python"

midranks = kernels.midranks
sweep = kernels.sweep
pearson_sums = kernels.pearson_sums

__all__ = ["BACKEND", "kernels", "midranks", "pearson_sums", "sweep"]
