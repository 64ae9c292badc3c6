"""Lattice failure statistics, random small-|g| statistics and combination counts."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from . import kernels
from .geometry import pair_index_table
from .recon import count_combinations, enumerate_combinations


@lru_cache(maxsize=1)
def four_point_tuples() -> np.ndarray:
    """The 576 admissible tuples for n = 4 as pair indices in g-argument order."""
    table = pair_index_table(4)
    rows = [[int(table[p.i, p.j]) for p in combo.slots] for combo in enumerate_combinations(4)]
    arr = np.array(rows, dtype=np.int64)
    arr.flags.writeable = False
    return arr


def _four_point_distances(coords: np.ndarray) -> np.ndarray:
    """(N, 4, 2) coordinates -> (N, 6) squared distances in pair order."""
    cols = []
    for i, j in combinations(range(4), 2):
        diff = coords[:, i, :] - coords[:, j, :]
        cols.append((diff * diff).sum(axis=1))
    return np.stack(cols, axis=1)


@dataclass(frozen=True)
class LatticeReport:
    N: int
    total_configs: int
    repeated_distance_count: int
    fail_count: int
    g_zero_count: int
    nonrepeated_fail_count: int
    nonrepeated_fail_pct: Fraction
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["nonrepeated_fail_pct"] = str(self.nonrepeated_fail_pct)
        out["nonrepeated_fail_pct_float"] = float(self.nonrepeated_fail_pct)
        return out

    def summary(self) -> str:
        return (f"{self.total_configs} / {self.repeated_distance_count} / {self.fail_count}"
                f"  (non-repeated failing: {self.nonrepeated_fail_count}, "
                f"{float(self.nonrepeated_fail_pct):.1%})")


def lattice_experiment(N: int, n: int = 4) -> LatticeReport:
    """All 4-point subsets of the integer lattice {0..N}^2, tested exactly.

    A configuration fails when it has repeated distances or some admissible
    tuple gives g = 0 (the n = 4 verdict of ``test_reconstructible_2d``).
    """
    if N < 1:
        raise ValueError("box size N must be >= 1")
    if n != 4:
        raise ValueError("the lattice experiment is defined for four-point configurations")
    t0 = time.perf_counter()
    pts = np.array([(x, y) for x in range(N + 1) for y in range(N + 1)], dtype=np.int64)
    subsets = np.array(list(combinations(range(len(pts)), 4)), dtype=np.int64)
    d6 = np.ascontiguousarray(_four_point_distances(pts[subsets]))
    s = np.sort(d6, axis=1)
    repeated = np.any(s[:, 1:] == s[:, :-1], axis=1)
    first, _ = kernels.scan_g_batch(d6, four_point_tuples(), np.int64(0), np.iinfo(np.int64).max)
    gzero = first >= 0
    failed = repeated | gzero
    total = len(subsets)
    rep = int(repeated.sum())
    nonrep_fail = int((failed & ~repeated).sum())
    pct = Fraction(nonrep_fail, total - rep) if total > rep else Fraction(0)
    return LatticeReport(N, total, rep, int(failed.sum()), int(gzero.sum()), nonrep_fail, pct,
                         time.perf_counter() - t0)


@dataclass(frozen=True)
class RandomGReport:
    trials: int
    threshold: float
    below_threshold_count: int
    seed: int
    generator: str = "numpy.random.default_rng (PCG64)"
    smallest_min_abs_g: float = float("nan")

    def to_dict(self) -> dict:
        return asdict(self)


def random_min_abs_g(trials: int, seed: int) -> np.ndarray:
    """Per configuration, min |g| over the 576 tuples for uniform(0,1)^2 points."""
    rng = np.random.default_rng(seed)
    coords = rng.random((trials, 4, 2))
    d6 = np.ascontiguousarray(_four_point_distances(coords))
    _, minabs = kernels.scan_g_batch(d6, four_point_tuples(), -1.0, np.inf)
    return np.asarray(minabs)


def random_g_statistics(trials: int, threshold: float, seed: int) -> RandomGReport:
    if trials < 0:
        raise ValueError("trials must be non-negative")
    minabs = random_min_abs_g(trials, seed)
    below = int((minabs < threshold).sum())
    smallest = float(minabs.min()) if trials else float("nan")
    return RandomGReport(trials, float(threshold), below, seed, smallest_min_abs_g=smallest)


def count_table(n_values, timed: bool = False) -> list[tuple]:
    """Rows (n, combination count), plus wall-time of a full random test when ``timed``."""
    rows = []
    for n in n_values:
        count = count_combinations(n)
        if not timed:
            rows.append((n, count))
            continue
        from .geometry import PointConfig
        from .recon import test_reconstructible_2d

        rng = np.random.default_rng(n)
        P = PointConfig.from_points(rng.random((n, 2)).tolist(), exact=False)
        t0 = time.perf_counter()
        test_reconstructible_2d(P, stop_first=False)
        rows.append((n, count, time.perf_counter() - t0))
    return rows


def lattice_total(N: int) -> int:
    return comb((N + 1) ** 2, 4)
