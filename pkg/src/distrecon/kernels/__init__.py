"""Hot kernels behind a backend switch (see ``distrecon._backend``).

``numba_kernels`` / ``numpy_kernels`` expose both implementations for
benchmarks and cross-checks; the module-level names are the selected ones.
Object-dtype inputs always route to numpy.
"""
from .._backend import USE_NUMBA
from . import _numpy as numpy_kernels

if USE_NUMBA:
    from . import _numba as numba_kernels
else:  # pragma: no cover - exercised with DISTRECON_BACKEND=numpy
    numba_kernels = None

_active = numba_kernels if USE_NUMBA else numpy_kernels


def _pick(arr):
    return numpy_kernels if arr.dtype == object else _active


def scan_g2d(dvec, outer, pair_of, eps, stop_first, init):
    return _pick(dvec).scan_g2d(dvec, outer, pair_of, eps, stop_first, init)


def scan_gm(dvec, outer, pair_of, K, eidx, perms, signs, eps, stop_first, init):
    return _pick(dvec).scan_gm(dvec, outer, pair_of, K, eidx, perms, signs, eps, stop_first, init)


def scan_g_batch(dvals, tuples, eps, init):
    return _pick(dvals).scan_g_batch(dvals, tuples, eps, init)


def adjacency_scan(P, masks, tri_a, tri_b, cap):
    return _active.adjacency_scan(P, masks, tri_a, tri_b, cap)


__all__ = ["scan_g2d", "scan_gm", "scan_g_batch", "adjacency_scan",
           "numpy_kernels", "numba_kernels"]
