"""Backend selection for the exhaustive Schwartz kernels.

The compiled extension is used when it was built; setting
ASAI_PADIC_PURE_PYTHON=1 forces the numpy fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("ASAI_PADIC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

unit_average_mismatches = _impl.unit_average_mismatches
distribution_mismatches = _impl.distribution_mismatches

__all__ = ["BACKEND", "unit_average_mismatches", "distribution_mismatches"]
