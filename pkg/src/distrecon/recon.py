"""Reconstructibility-from-distances test and configuration comparison.

The test enumerates every admissible tuple of distinct pairs
({i0,i1}, S_2, ..., S_{k-1}, {i0,i2}) and checks that the distance relation
(g in the plane, g_m in R^m) does not vanish on the corresponding squared
distances. Tuples are visited in a fixed canonical order: ordered (i0, i1, i2)
lexicographically, then the middle pairs as lexicographic k-permutations of
the remaining pairs. The first vanishing tuple in that order is the witness.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import permutations
from typing import Iterator, NamedTuple

import numpy as np

from . import kernels
from ._backend import set_threads
from .geometry import (
    PairKey,
    PointConfig,
    distance_distribution,
    has_repeated_distances,
    pair_distances,
    pair_index_table,
    pairs,
    rescaled_distribution,
    same_distribution,
)
from .invariants import (
    is_symmetric_distribution,
    orientation_distribution,
    relation_layout,
)

INT64_SAFE = 2**62


class Verdict(str, Enum):
    PASSES = "PassesTest"
    FAILS = "FailsTest"
    NOT_APPLICABLE = "NotApplicable"


class Orientation(str, Enum):
    SAME_SE2 = "SameSE2"
    MIRROR_PAIR = "MirrorPair"
    INCONCLUSIVE = "Inconclusive"
    NOT_REQUESTED = "NotRequested"


class ComboTuple(NamedTuple):
    """One admissible index choice; ``middle`` holds the k-2 inner pairs."""

    i0: int
    i1: int
    i2: int
    middle: tuple[PairKey, ...]

    @property
    def slots(self) -> tuple[PairKey, ...]:
        """Pairs in relation-argument order: {i0,i1}, middle..., {i0,i2}."""
        return (PairKey.of(self.i0, self.i1), *self.middle, PairKey.of(self.i0, self.i2))

    def one_based(self) -> list[list[int]]:
        return [p.one_based() for p in self.slots]


ComboTuple2D = ComboTuple


def outer_triples(n: int) -> np.ndarray:
    """Ordered distinct (i0, i1, i2) in lexicographic order, shape (n(n-1)(n-2), 3)."""
    rows = [(a, b, c) for a in range(n) for b in range(n) if b != a
            for c in range(n) if c != a and c != b]
    return np.array(rows, dtype=np.int64).reshape(-1, 3)


def count_combinations(n: int, m: int = 2) -> int:
    """n(n-1)(n-2) * prod_{j=2}^{k-1} (C(n,2) - j) with k = C(m+2,2)."""
    if n < max(4, m + 2):
        raise ValueError(f"count_combinations needs n >= {max(4, m + 2)}, got {n}")
    k = math.comb(m + 2, 2)
    P = math.comb(n, 2)
    total = n * (n - 1) * (n - 2)
    for j in range(2, k):
        total *= P - j
    return total


def count_combinations_expanded(n: int) -> Fraction:
    """Degree-11 expanded form of the planar count, divided by 16."""
    coeffs = (1, -7, -8, 138, -83, -983, 1074, 2996, -3672, -3296, 3840, 0)
    poly = 0
    for c in coeffs:
        poly = poly * n + c
    return Fraction(poly, 16)


def enumerate_combinations(n: int, m: int = 2) -> Iterator[ComboTuple]:
    """Yield every admissible tuple once, in canonical order."""
    if n < max(4, m + 2):
        raise ValueError(f"enumerate_combinations needs n >= {max(4, m + 2)}, got {n}")
    K = math.comb(m + 2, 2) - 2
    plist = pairs(n)
    for i0, i1, i2 in outer_triples(n).tolist():
        s1, sk = PairKey.of(i0, i1), PairKey.of(i0, i2)
        rest = [p for p in plist if p != s1 and p != sk]
        for mid in permutations(rest, K):
            yield ComboTuple(i0, i1, i2, mid)


@dataclass(frozen=True)
class Witness:
    combo: ComboTuple
    g: object

    def to_dict(self) -> dict:
        return {"i0": self.combo.i0 + 1, "i1": self.combo.i1 + 1, "i2": self.combo.i2 + 1,
                "pairs": self.combo.one_based(), "g": scalar_str(self.g)}


@dataclass(frozen=True)
class ReconReport:
    """Outcome of the test.

    ``certified`` is True only when PassesTest actually proves
    reconstructibility (n >= 5 and n >= m+2). In particular n = 4 results
    are never certified. FailsTest holds when a witness exists or the
    configuration has repeated distances.
    """

    verdict: Verdict
    n: int
    m: int
    mode: str
    epsilon: float
    witness: Witness | None = None
    min_abs_g: object = None
    combos_checked: int = 0
    total_combinations: int = 0
    repeated_distances: bool = False
    certified: bool = False
    wall_time: float = 0.0
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "certified": self.certified,
            "n": self.n,
            "m": self.m,
            "mode": self.mode,
            "epsilon": self.epsilon,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "min_abs_g": None if self.min_abs_g is None else scalar_str(self.min_abs_g),
            "combos_checked": self.combos_checked,
            "total_combinations": self.total_combinations,
            "repeated_distances": self.repeated_distances,
            "wall_time": self.wall_time,
            "message": self.message,
        }


def scalar_str(v) -> str:
    if isinstance(v, (Fraction, int, np.integer)):
        return str(Fraction(v))
    return repr(float(v))


def _lcm_denominator(coords) -> int:
    L = 1
    for c in coords.ravel():
        L = math.lcm(L, c.denominator)
    return L


def _prepare(P: PointConfig, degree: int, bound):
    """Kernel input for P: (dvec, eps-dtype zero or None, unscale function, d_max).

    Exact inputs are scaled to integers by the lcm of denominators L; values
    of a relation of the given degree then scale by L^(2*degree). int64 is
    used only when ``bound(d_max)`` fits, else an object array of Python ints.
    """
    if P.exact:
        L = _lcm_denominator(P.coords)
        ints = [[int(c * L) for c in row] for row in P.coords.tolist()]
        n = P.n
        d = [sum((a - b) ** 2 for a, b in zip(ints[i], ints[j]))
             for i in range(n) for j in range(i + 1, n)]
        dmax = max(d)
        dtype = np.int64 if bound(dmax) < INT64_SAFE else object
        dvec = np.array(d, dtype=dtype)
        scale = L ** (2 * degree)

        def unscale(v):
            return Fraction(int(v), scale)

        return dvec, unscale, Fraction(dmax, L * L)
    dvec = np.ascontiguousarray(pair_distances(P), dtype=np.float64)
    return dvec, float, float(dvec.max())


def _not_applicable(P: PointConfig, epsilon: float, message: str) -> ReconReport:
    return ReconReport(Verdict.NOT_APPLICABLE, P.n, P.m, "exact" if P.exact else "float",
                       epsilon, message=message)


def _run(P, epsilon, relative, early_exit_repeated, stop_first, threads, m, scan):
    """Shared driver for the planar and general-dimension tests."""
    t0 = time.perf_counter()
    if threads is not None:
        set_threads(threads)
    mode = "exact" if P.exact else "float"
    n = P.n
    k = math.comb(m + 2, 2)
    K = k - 2
    total = count_combinations(n, m)
    repeated = has_repeated_distances(P)
    if early_exit_repeated and repeated:
        return ReconReport(Verdict.FAILS, n, m, mode, epsilon, repeated_distances=True,
                           total_combinations=total, wall_time=time.perf_counter() - t0,
                           message="repeated distances")
    degree = m + 1
    dvec, unscale, dmax = scan["prepare"](P, degree)
    if P.exact:
        eps = dvec.dtype.type(0) if dvec.dtype != object else 0
        init = np.iinfo(np.int64).max if dvec.dtype != object else None
    else:
        eps = float(epsilon) * (float(dmax) ** degree if relative else 1.0)
        init = np.inf
    outer = outer_triples(n)
    pair_of = pair_index_table(n)
    first, wit, gval, minabs, checked = scan["kernel"](dvec, outer, pair_of, eps, bool(stop_first), init)
    plist = pairs(n)
    per_outer = total // len(outer)
    hits = np.flatnonzero(first >= 0)
    witness = None
    if hits.size:
        t = int(hits[0])
        i0, i1, i2 = (int(x) for x in outer[t])
        combo = ComboTuple(i0, i1, i2, tuple(plist[int(p)] for p in wit[t, :K]))
        witness = Witness(combo, unscale(gval[t]))
    if witness is not None and stop_first:
        combos = t * per_outer + int(first[t]) + 1
        min_abs = abs(witness.g)
    else:
        combos = int(checked.sum())
        valid = [v for v in minabs.tolist() if v is not None]
        min_abs = unscale(min(valid)) if valid else None
    failed = witness is not None or repeated
    verdict = Verdict.FAILS if failed else Verdict.PASSES
    certified = verdict is Verdict.PASSES and n >= 5 and n >= m + 2
    message = ""
    if verdict is Verdict.PASSES and not certified:
        message = "passes the relation test, but n = 4 gives no reconstructibility certificate"
    elif witness is None and repeated:
        message = "repeated distances"
    return ReconReport(verdict, n, m, mode, float(epsilon), witness, min_abs, combos, total,
                       repeated, certified, time.perf_counter() - t0, message)


def _prepare_2d(P, degree):
    return _prepare(P, degree, lambda D: 44 * D ** 3)


def test_reconstructible_2d(P: PointConfig, epsilon: float = 1e-9, *, relative: bool = False,
                            early_exit_repeated: bool = False, stop_first: bool = True,
                            threads: int | None = None) -> ReconReport:
    """Run the planar test on P.

    Exact configurations test g == 0 exactly (epsilon ignored). Float ones
    test |g| <= epsilon, or epsilon * d_max^3 with ``relative=True``.
    With ``stop_first=False`` every tuple is evaluated so ``min_abs_g`` is the
    minimum over all of them.
    """
    if P.m != 2:
        raise ValueError("the planar test needs m = 2; use test_reconstructible_md")
    if P.n < 4:
        return _not_applicable(P, epsilon, "n <= 3: always reconstructible, test not applicable")
    scan = {"prepare": _prepare_2d, "kernel": kernels.scan_g2d}
    return _run(P, epsilon, relative, early_exit_repeated, stop_first, threads, 2, scan)


# keep pytest from collecting the public test_* functions when imported in tests
test_reconstructible_2d.__test__ = False


def test_reconstructible_md(P: PointConfig, epsilon: float = 1e-9, *, relative: bool = False,
                            early_exit_repeated: bool = False, stop_first: bool = True,
                            threads: int | None = None) -> ReconReport:
    """General-dimension test using the (m+1)x(m+1) relation determinant g_m."""
    m = P.m
    if P.n < m + 2 or P.n < 4:
        return _not_applicable(P, epsilon, f"n < {max(4, m + 2)}: test not applicable")
    eidx, perms, signs = relation_layout(m)
    K = math.comb(m + 2, 2) - 2
    fact = math.factorial(m + 1)

    def prepare(Pc, degree):
        return _prepare(Pc, degree, lambda D: fact * (2 * D) ** (m + 1))

    def kernel(dvec, outer, pair_of, eps, stop_first, init):
        return kernels.scan_gm(dvec, outer, pair_of, K, eidx, perms, signs, eps, stop_first, init)

    return _run(P, epsilon, relative, early_exit_repeated, stop_first, threads, m,
                {"prepare": prepare, "kernel": kernel})


test_reconstructible_md.__test__ = False


@dataclass(frozen=True)
class CompareVerdict:
    distribution_match: bool
    orientation: Orientation = Orientation.NOT_REQUESTED
    similarity_match: bool | None = None
    mode: str = "rigid"
    details: dict = field(default_factory=dict)

    @property
    def matched(self) -> bool:
        if self.mode == "similarity":
            return bool(self.similarity_match)
        if self.mode == "orientation":
            return self.distribution_match and self.orientation is Orientation.SAME_SE2
        return self.distribution_match

    def to_dict(self) -> dict:
        return {"mode": self.mode, "matched": self.matched,
                "distribution_match": self.distribution_match,
                "orientation": self.orientation.value,
                "similarity_match": self.similarity_match, **self.details}


def compare_configs(P: PointConfig, Q: PointConfig, mode: str = "rigid", tol: float = 1e-9,
                    epsilon: float = 1e-9) -> CompareVerdict:
    """Compare two configurations by their distance (and orientation) distributions.

    ``tol`` is relative: squared distances are compared to within
    ``tol * d_max``, I-values to within ``tol * max|I|``. Exact pairs compare
    exactly.
    """
    if P.m != Q.m or P.n != Q.n:
        raise ValueError("configurations must have the same n and m")
    if mode not in ("rigid", "orientation", "similarity"):
        raise ValueError(f"unknown comparison mode {mode!r}")
    if not (P.exact and Q.exact):
        P, Q = P.as_float(), Q.as_float()
    DP, DQ = distance_distribution(P), distance_distribution(Q)
    scale = max(abs(float(DP.entries[-1][0])), abs(float(DQ.entries[-1][0])))
    dist_match = same_distribution(DP, DQ, tol * scale)
    if mode == "rigid":
        return CompareVerdict(dist_match, mode=mode)
    if mode == "similarity":
        sim = same_distribution(rescaled_distribution(P), rescaled_distribution(Q), tol)
        return CompareVerdict(dist_match, similarity_match=sim, mode=mode)
    if P.m != 2 or P.n < 4:
        raise ValueError("orientation comparison needs planar configurations with n >= 4")
    report = test_reconstructible_2d(P, epsilon)
    IP, IQ = orientation_distribution(P), orientation_distribution(Q)
    symmetric = is_symmetric_distribution(IP)
    details = {"certified": report.certified, "symmetric_I": symmetric}
    orient = Orientation.INCONCLUSIVE
    if report.certified and dist_match and not symmetric:
        if IP.matches(IQ, tol):
            orient = Orientation.SAME_SE2
        elif IP.matches(IQ.negated(), tol):
            orient = Orientation.MIRROR_PAIR
    return CompareVerdict(dist_match, orient, mode=mode, details=details)
