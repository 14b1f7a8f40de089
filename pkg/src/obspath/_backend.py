"""Kernel backend selection.

The compiled extension (``obspath._fastkern``, Cython) is preferred; the
pure-Python module is the fallback.  Set OBSPATH_PURE=1 to force the
fallback, e.g. for the backend-parity tests and benchmarks.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("OBSPATH_PURE") == "1":
    kernels = _kernels_py
else:
    try:
        from . import _fastkern as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py


def backend_name() -> str:
    return kernels.BACKEND_NAME
