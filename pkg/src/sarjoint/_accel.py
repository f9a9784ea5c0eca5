"""Numba switch shared by every kernel module.

Set ``SARJOINT_DISABLE_NUMBA=1`` in the environment to run the pure-numpy
kernels instead of the compiled loops (also used when numba is missing).
"""
import os

_FLAG = os.environ.get("SARJOINT_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG in {"1", "true", "yes", "on"}

try:
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _numba_njit = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV


def njit(func):
    """Compile ``func`` with numba when enabled, otherwise return it untouched."""
    if not USE_NUMBA:
        return func
    return _numba_njit(cache=True, nogil=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
