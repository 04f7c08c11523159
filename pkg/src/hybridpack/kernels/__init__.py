"""Hot inner loops with a numba backend and a pure-numpy fallback.

The backend is chosen once at import time. numba is used when it imports
cleanly and ``HYBRIDPACK_DISABLE_NUMBA`` is not set; otherwise the numpy
reference path runs. Both modules stay importable for benchmarking.
"""

from .._config import numba_requested
from . import _numpy as numpy_backend

try:
    if not numba_requested():
        raise ImportError("numba disabled by environment")
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - depends on environment
    numba_backend = None

_active = numba_backend if numba_backend is not None else numpy_backend
BACKEND = "numba" if numba_backend is not None else "numpy"

apply_matrix = _active.apply_matrix
apply_monomial = _active.apply_monomial
weyl_syndromes = _active.weyl_syndromes
site_marginal = _active.site_marginal

__all__ = [
    "BACKEND",
    "apply_matrix",
    "apply_monomial",
    "weyl_syndromes",
    "site_marginal",
    "numpy_backend",
    "numba_backend",
]
