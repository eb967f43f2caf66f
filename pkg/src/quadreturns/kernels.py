"""Dispatch to numba kernels, or to the numpy fallback when
``QUADRETURNS_DISABLE_NUMBA`` is set to a truthy value (or numba is missing).
"""

import os

from . import _numpy_kernels

_DISABLED = os.environ.get("QUADRETURNS_DISABLE_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
    "on",
}

if _DISABLED:
    _impl = _numpy_kernels
    BACKEND = "numpy"
else:
    try:
        from . import _numba_kernels as _impl

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a hard dependency
        _impl = _numpy_kernels
        BACKEND = "numpy"

survival_log = _impl.survival_log
dense_onedim = _impl.dense_onedim
philox4x32 = _impl.philox4x32
simulate_block = _impl.simulate_block

__all__ = [
    "BACKEND",
    "survival_log",
    "dense_onedim",
    "philox4x32",
    "simulate_block",
]
