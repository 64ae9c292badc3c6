"""Compare the numba and pure-numpy kernels on the hot loops.

    python benchmarks/bench_backends.py [--max-n 7] [--repeat 3]

Each kernel is run once untimed (JIT warm-up) before timing.
"""
import argparse
import time

import numpy as np

from distrecon import PointConfig
from distrecon.experiments import _four_point_distances, four_point_tuples
from distrecon.geometry import pair_distances, pair_index_table
from distrecon.kernels import numba_kernels, numpy_kernels
from distrecon.perms import _adjacency_tables
from distrecon.recon import count_combinations, outer_triples


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = {"numba": numba_kernels, "numpy": numpy_kernels}
    rng = np.random.default_rng(0)
    print(f"{'workload':<28}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")

    for n in range(5, args.max_n + 1):
        P = PointConfig.from_points(rng.integers(-50, 51, size=(n, 2)).tolist())
        dvec = np.array(pair_distances(P).tolist(), dtype=np.int64)
        outer, table = outer_triples(n), pair_index_table(n)
        res = {}
        for name, k in impls.items():
            res[name] = best_of(lambda k=k: k.scan_g2d(dvec, outer, table, np.int64(0), False,
                                                       np.iinfo(np.int64).max), args.repeat)
        label = f"g-scan n={n} ({count_combinations(n):,})"
        print(f"{label:<28}{res['numba']:>12.4f}{res['numpy']:>12.4f}{res['numpy'] / res['numba']:>10.1f}")

    pts = np.array([(x, y) for x in range(5) for y in range(5)])
    from itertools import combinations
    subsets = np.array(list(combinations(range(25), 4)))
    d6 = np.ascontiguousarray(_four_point_distances(pts[subsets]))
    tuples = four_point_tuples()
    res = {name: best_of(lambda k=k: k.scan_g_batch(d6, tuples, np.int64(0), np.iinfo(np.int64).max),
                         args.repeat) for name, k in impls.items()}
    print(f"{'lattice N=4 (12650 cfgs)':<28}{res['numba']:>12.4f}{res['numpy']:>12.4f}"
          f"{res['numpy'] / res['numba']:>10.1f}")

    masks, ta, tb = _adjacency_tables(5)
    res = {name: best_of(lambda k=k: k.adjacency_scan(10, masks, ta, tb, 1000), 1)
           for name, k in impls.items()}
    print(f"{'adjacency scan n=5 (10!)':<28}{res['numba']:>12.4f}{res['numpy']:>12.4f}"
          f"{res['numpy'] / res['numba']:>10.1f}")


if __name__ == "__main__":
    main()
