"""Hot kernels, dispatched to numba loops or the numpy fallback.

``SARJOINT_DISABLE_NUMBA=1`` selects the numpy versions at import time.
Both implementations stay importable as ``loops`` and ``vector`` so tests
and the benchmark can compare them directly.
"""
import numpy as np

from .._accel import USE_NUMBA, backend_name
from . import _loops as loops
from . import _vector as vector

active = loops if USE_NUMBA else vector

__all__ = ["active", "loops", "vector", "backend_name", "new_counters", "USE_NUMBA"]


def new_counters():
    """Fresh ``[region_builds, single_entry_updates]`` counter array."""
    return np.zeros(2, np.int64)
