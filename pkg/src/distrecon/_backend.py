"""Kernel backend selection.

``DISTRECON_BACKEND=numpy`` forces the pure-numpy kernels; the default is
numba when it can be imported.
"""
from __future__ import annotations

import os

# the bundled TBB is too old for numba and only produces a warning
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

REQUESTED = os.environ.get("DISTRECON_BACKEND", "numba").strip().lower()
if REQUESTED not in ("numba", "numpy"):
    raise ImportError(f"DISTRECON_BACKEND must be 'numba' or 'numpy', got {REQUESTED!r}")

USE_NUMBA = REQUESTED == "numba" and numba is not None
BACKEND = "numba" if USE_NUMBA else "numpy"


def set_threads(count: int | None) -> int:
    """Set the numba worker count (no-op for numpy). Returns the count in effect."""
    if numba is None:
        return 1
    if count is None:
        count = numba.config.NUMBA_NUM_THREADS
    count = max(1, min(int(count), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(count)
    return count


def max_threads() -> int:
    return 1 if numba is None else numba.config.NUMBA_NUM_THREADS
