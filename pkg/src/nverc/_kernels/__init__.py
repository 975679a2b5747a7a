"""Kernel dispatch: compiled extension when available, numpy fallback otherwise.

The compiled module is optional; building it is worthwhile for lab-frame
sweeps (see ``bench/benchmark_kernels.py`` for the comparison).  Set
``NVERC_PURE_PYTHON=1`` to force the fallback regardless.
"""

import os

from . import pyfallback

if os.environ.get("NVERC_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = pyfallback
    BACKEND = "python"
else:
    try:
        from . import _rk4 as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        _impl = pyfallback
        BACKEND = "python"

rk4_lab_segment = _impl.rk4_lab_segment


def backend() -> str:
    """Which kernel implementation is active: 'compiled' or 'python'."""
    return BACKEND
