"""Distance relations (g, its determinant form, g_m) and the planar invariant I."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb
from typing import Sequence

import numpy as np

from .geometry import DistanceMultiset, PointConfig


def eval_g(args: Sequence):
    """The degree-3 polynomial g(U, V, W, X, Y, Z).

    Arguments are squared distances (d_ij, d_ik, d_il, d_jk, d_jl, d_kl).
    Entries may be numpy arrays, in which case g is evaluated elementwise.
    """
    U, V, W, X, Y, Z = args
    return (2 * U * U * Z + 2 * U * V * X - 2 * U * V * Y - 2 * U * V * Z
            - 2 * U * X * W - 2 * U * X * Z + 2 * U * Y * W - 2 * U * Y * Z
            - 2 * U * W * Z + 2 * U * Z * Z + 2 * V * V * Y - 2 * V * X * Y
            - 2 * V * X * W + 2 * V * Y * Y - 2 * V * Y * W - 2 * V * Y * Z
            + 2 * V * W * Z + 2 * X * X * W - 2 * X * Y * W + 2 * X * Y * Z
            + 2 * X * W * W - 2 * X * W * Z)


def eval_g_det(args: Sequence):
    """Determinant of the symmetric 3x3 relation matrix based at point l."""
    d_ij, d_ik, d_il, d_jk, d_jl, d_kl = args
    a, b, c = -2 * d_il, -2 * d_jl, -2 * d_kl
    e = d_ij - d_il - d_jl
    f = d_ik - d_il - d_kl
    h = d_jk - d_jl - d_kl
    return a * b * c + 2 * e * f * h - a * h * h - b * f * f - c * e * e


@lru_cache(maxsize=None)
def relation_layout(m: int):
    """Index tables for the (m+1)x(m+1) relation matrix over a flat distance vector.

    The flat vector lists d_{a,b} for 0 <= a < b <= m+1 lexicographically.
    Returns ``(eidx, perms, signs)``: ``eidx[r, c]`` holds the flat positions of
    (d_{r+1,c+1}, d_{0,r+1}, d_{0,c+1}) (first slot -1 on the diagonal), and
    ``perms``/``signs`` enumerate the Leibniz expansion.
    """
    m1 = m + 1
    flat = {pair: k for k, pair in enumerate(combinations(range(m + 2), 2))}
    eidx = np.full((m1, m1, 3), -1, dtype=np.int64)
    for r in range(m1):
        for c in range(m1):
            a, b = r + 1, c + 1
            if a != b:
                eidx[r, c, 0] = flat[(min(a, b), max(a, b))]
            eidx[r, c, 1] = flat[(0, a)]
            eidx[r, c, 2] = flat[(0, b)]
    perms = np.array(list(permutations(range(m1))), dtype=np.int64)
    signs = np.array([_perm_sign(p) for p in perms], dtype=np.int64)
    for table in (eidx, perms, signs):
        table.flags.writeable = False
    return eidx, perms, signs


def _perm_sign(p) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def relation_matrix(m: int, d: Sequence):
    if len(d) != comb(m + 2, 2):
        raise ValueError(f"g_{m} takes {comb(m + 2, 2)} distances, got {len(d)}")
    eidx, _, _ = relation_layout(m)
    m1 = m + 1
    rows = []
    for r in range(m1):
        row = []
        for c in range(m1):
            if r == c:
                row.append(-2 * d[eidx[r, c, 1]])
            else:
                row.append(d[eidx[r, c, 0]] - d[eidx[r, c, 1]] - d[eidx[r, c, 2]])
        rows.append(row)
    return rows


def exact_det(rows) -> Fraction:
    """Determinant by Gaussian elimination over the rationals."""
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for r in range(k + 1, n):
            if a[r][k] != 0:
                f = a[r][k] / a[k][k]
                for c in range(k, n):
                    a[r][c] -= f * a[k][c]
    return det


def _all_exact(values) -> bool:
    return all(isinstance(v, (int, Fraction, np.integer)) for v in values)


def eval_gm(m: int, d: Sequence):
    """Relation polynomial for m+2 points in R^m, as the determinant

    det(d_{nu,mu} - d_{nu,0} - d_{mu,0}) for nu, mu = 1..m+1.

    ``d`` is ordered lexicographically by pair (a, b), 0 <= a < b <= m+1.
    Exact for int/Fraction input, float64 otherwise.
    """
    d = list(d)
    rows = relation_matrix(m, d)
    if _all_exact(d):
        det = exact_det(rows)
        return det.numerator if det.denominator == 1 else det
    return float(np.linalg.det(np.array(rows, dtype=float)))


def signed_area(a, b, c):
    """det(a - c, b - c) for planar points."""
    if len(a) != 2 or len(b) != 2 or len(c) != 2:
        raise ValueError("signed_area is defined for points in R^2")
    return (a[0] - c[0]) * (b[1] - c[1]) - (a[1] - c[1]) * (b[0] - c[0])


def eval_I(q1, q2, q3, q4):
    """SE(2)-invariant, relabeling-invariant I; reflections send I to -I."""
    a123 = signed_area(q1, q2, q3)
    a124 = signed_area(q1, q2, q4)
    a134 = signed_area(q1, q3, q4)
    return ((a124 * a124 - a134 * a134)
            * (a123 * a123 - a134 * a134)
            * (a123 * a123 - a124 * a124)
            * (a123 - a124 + 2 * a134)
            * (a123 - 2 * a124 + a134)
            * (2 * a123 - a124 + a134))


@dataclass(frozen=True)
class OrientationDistribution:
    """Sorted multiset of I over all 4-subsets of a planar configuration."""

    values: tuple
    exact: bool

    @property
    def total(self) -> int:
        return len(self.values)

    @property
    def entries(self) -> tuple:
        return DistanceMultiset.from_values(self.values, self.exact, tol=0.0).entries

    def negated(self) -> "OrientationDistribution":
        return OrientationDistribution(tuple(sorted(-v for v in self.values)), self.exact)

    def scale(self) -> float:
        return max((abs(float(v)) for v in self.values), default=0.0)

    def matches(self, other: "OrientationDistribution", rtol: float = 1e-9) -> bool:
        """Equality of the sorted multisets; relative tolerance in float mode."""
        if self.total != other.total:
            return False
        if self.exact and other.exact:
            return self.values == other.values
        tol = rtol * max(self.scale(), other.scale())
        return all(abs(float(a) - float(b)) <= tol for a, b in zip(self.values, other.values))


def orientation_distribution(P: PointConfig) -> OrientationDistribution:
    if P.m != 2:
        raise ValueError("orientation distribution is defined for planar configurations")
    if P.n < 4:
        raise ValueError("orientation distribution needs at least four points")
    pts = P.coords.tolist()
    vals = [eval_I(*(pts[i] for i in quad)) for quad in combinations(range(P.n), 4)]
    return OrientationDistribution(tuple(sorted(vals)), P.exact)


def is_symmetric_distribution(D: OrientationDistribution, tol: float | None = None) -> bool:
    """True when the distribution of I equals that of -I.

    ``tol`` is absolute; in float mode it defaults to ``1e-9 * max|I|``.
    """
    neg = D.negated()
    if D.exact:
        return D.values == neg.values
    if tol is None:
        tol = 1e-9 * D.scale()
    return all(abs(a - b) <= tol for a, b in zip(D.values, neg.values))
