"""Backend selection for the hot loops.

The compiled Cython module is used when it was built; otherwise the numpy
fallback is loaded. Set ``VACHARVEST_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("VACHARVEST_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

cos2_spectrum = _impl.cos2_spectrum
cos2_overlap = _impl.cos2_overlap

__all__ = ["BACKEND", "cos2_spectrum", "cos2_overlap"]
