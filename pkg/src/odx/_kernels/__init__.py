"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; setting
``ODX_PURE_PYTHON=1`` forces the numpy fallback, which is handy for
benchmarking and for debugging the compiled path against the reference.
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("ODX_PURE_PYTHON") == "1":
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

jacobi_eigh = _impl.jacobi_eigh
pgm_average = _impl.pgm_average

__all__ = ["BACKEND", "jacobi_eigh", "pgm_average"]
