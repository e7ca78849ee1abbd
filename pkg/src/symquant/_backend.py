"""Select the kernel implementation at import time.

The compiled extension is preferred; set ``SYMQUANT_PURE_PYTHON=1`` to force
the numpy fallback (used by the equivalence tests and the benchmark).
"""
import importlib
import os

from . import _pykernels

compiled = None
try:
    compiled = importlib.import_module("symquant._kernels")
except ImportError:
    pass

if compiled is not None and not os.environ.get("SYMQUANT_PURE_PYTHON"):
    kernels = compiled
else:
    kernels = _pykernels

BACKEND = kernels.NAME
