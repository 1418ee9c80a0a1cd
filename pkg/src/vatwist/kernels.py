"""Selects the compiled product kernel when available.

Set ``VATWIST_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
graded_convolve = _kernels_py.graded_convolve

if not os.environ.get("VATWIST_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        graded_convolve = _compiled.graded_convolve
        BACKEND = "cython"

__all__ = ["BACKEND", "graded_convolve"]
