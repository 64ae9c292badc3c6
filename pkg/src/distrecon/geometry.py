"""Point configurations, squared-distance distributions and a congruence oracle.

A configuration is either *exact* (coordinates are ``Fraction``) or *float*
(``float64``); one mode per computation. Squared distances are the stored
quantity throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import NamedTuple, Sequence

import numpy as np

DEFAULT_MERGE_TOL = 1e-9


class DegenerateScale(ValueError):
    """All points coincide, so there is no scale to divide by."""


class PairKey(NamedTuple):
    """Unordered index pair stored as ``i < j`` (0-based)."""

    i: int
    j: int

    @classmethod
    def of(cls, a: int, b: int) -> "PairKey":
        if a == b:
            raise ValueError(f"pair needs two distinct indices, got {a}, {b}")
        return cls(a, b) if a < b else cls(b, a)

    def one_based(self) -> list[int]:
        return [self.i + 1, self.j + 1]


def pairs(n: int) -> list[PairKey]:
    """All C(n,2) pairs in lexicographic order."""
    return [PairKey(i, j) for i, j in combinations(range(n), 2)]


def pair_index_table(n: int) -> np.ndarray:
    """n x n table mapping (i, j) to the lexicographic pair index (-1 on the diagonal)."""
    table = np.full((n, n), -1, dtype=np.int64)
    for k, (i, j) in enumerate(combinations(range(n), 2)):
        table[i, j] = table[j, i] = k
    return table


def to_scalar(value, exact: bool):
    if exact:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, np.integer)):
            return Fraction(int(value))
        if isinstance(value, (float, np.floating)):
            if not math.isfinite(value):
                raise ValueError(f"non-finite coordinate {value!r}")
            return Fraction(repr(float(value)))
        if isinstance(value, Rational):
            return Fraction(value.numerator, value.denominator)
        return Fraction(str(value).strip())
    return float(value)


def _is_exact_like(value) -> bool:
    if isinstance(value, (bool, np.bool_)):
        return False
    if isinstance(value, (int, np.integer, Fraction, Rational)):
        return True
    if isinstance(value, str):
        try:
            Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            return False
        return True
    return False


@dataclass(frozen=True, eq=False)
class PointConfig:
    """n labelled points in R^m. ``coords`` has shape (n, m)."""

    coords: np.ndarray
    exact: bool

    @classmethod
    def from_points(cls, points, exact: bool | None = None) -> "PointConfig":
        """Build from nested sequences.

        With ``exact=None`` the mode is exact when every coordinate is an
        integer, a rational or a decimal string; floats select float mode.
        """
        if isinstance(points, PointConfig):
            return points.as_exact() if exact else points.as_float() if exact is False else points
        rows = [list(p) for p in points]
        if not rows:
            raise ValueError("a configuration needs at least one point")
        m = len(rows[0])
        if m == 0 or any(len(r) != m for r in rows):
            raise ValueError("every point must have the same positive number of coordinates")
        if exact is None:
            exact = all(_is_exact_like(c) for r in rows for c in r)
        if exact:
            arr = np.empty((len(rows), m), dtype=object)
            for a, r in enumerate(rows):
                for b, c in enumerate(r):
                    arr[a, b] = to_scalar(c, True)
        else:
            arr = np.array([[to_scalar(c, False) for c in r] for r in rows], dtype=np.float64)
        arr.flags.writeable = False
        return cls(arr, bool(exact))

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def m(self) -> int:
        return self.coords.shape[1]

    def as_float(self) -> "PointConfig":
        if not self.exact:
            return self
        return PointConfig.from_points(self.coords.astype(np.float64).tolist(), exact=False)

    def as_exact(self) -> "PointConfig":
        if self.exact:
            return self
        return PointConfig.from_points(self.coords.tolist(), exact=True)

    def relabeled(self, perm: Sequence[int]) -> "PointConfig":
        """Point ``perm[i]`` of the result is point ``i`` of self."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n)):
            raise ValueError("relabeling must be a permutation of range(n)")
        out = np.empty_like(self.coords)
        out[perm] = self.coords
        return PointConfig.from_points(out.tolist(), exact=self.exact)

    def scaled(self, lam) -> "PointConfig":
        lam = to_scalar(lam, self.exact)
        return PointConfig.from_points((self.coords * lam).tolist(), exact=self.exact)

    def tolist(self) -> list[list]:
        return self.coords.tolist()

    def __repr__(self) -> str:
        kind = "exact" if self.exact else "float"
        pts = ", ".join("(" + ", ".join(str(c) for c in row) + ")" for row in self.coords)
        return f"PointConfig[{kind}, m={self.m}]({pts})"


def squared_distance_matrix(P: PointConfig) -> np.ndarray:
    """Symmetric n x n matrix of squared Euclidean distances."""
    diff = P.coords[:, None, :] - P.coords[None, :, :]
    return (diff * diff).sum(axis=2)


def pair_distances(P: PointConfig) -> np.ndarray:
    """Squared distances in lexicographic pair order (length C(n,2))."""
    D = squared_distance_matrix(P)
    iu, ju = np.triu_indices(P.n, k=1)
    return D[iu, ju]


@dataclass(frozen=True)
class DistanceMultiset:
    """Sorted (value, multiplicity) entries of a distance distribution."""

    entries: tuple[tuple[object, int], ...]
    total: int
    exact: bool

    @classmethod
    def from_values(cls, values, exact: bool, tol: float | None = None) -> "DistanceMultiset":
        vals = sorted(values)
        if not vals:
            raise ValueError("empty distance distribution")
        if exact:
            entries: list[tuple[object, int]] = []
            for v in vals:
                if entries and entries[-1][0] == v:
                    entries[-1] = (v, entries[-1][1] + 1)
                else:
                    entries.append((v, 1))
            return cls(tuple(entries), len(vals), True)
        if tol is None:
            tol = DEFAULT_MERGE_TOL * max(abs(vals[0]), abs(vals[-1]))
        groups: list[list[float]] = []
        for v in vals:
            if groups and v - groups[-1][0] <= tol:
                groups[-1].append(v)
            else:
                groups.append([v])
        return cls(tuple((float(np.mean(g)), len(g)) for g in groups), len(vals), False)

    def values(self) -> list:
        """Expanded sorted values (each repeated by its multiplicity)."""
        return [v for v, k in self.entries for _ in range(k)]

    @property
    def max_multiplicity(self) -> int:
        return max(k for _, k in self.entries)

    def __str__(self) -> str:
        return ", ".join(f"{_fmt(v)} ×{k}" for v, k in self.entries)


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return f"{v:.6g}"


def distance_distribution(P: PointConfig, tol: float | None = None) -> DistanceMultiset:
    """Distribution of squared pairwise distances.

    In float mode values closer than ``tol`` (default ``1e-9 * d_max``) are
    merged; the tolerance is ignored in exact mode.
    """
    if P.n < 2:
        raise ValueError("distance distribution needs at least two points")
    return DistanceMultiset.from_values(pair_distances(P).tolist(), P.exact, tol)


def rescaled_distribution(P: PointConfig, tol: float | None = None) -> DistanceMultiset:
    """Distribution of squared distances divided by the largest one."""
    if P.n < 2:
        raise ValueError("distance distribution needs at least two points")
    vals = pair_distances(P).tolist()
    dmax = max(vals)
    if dmax == 0:
        raise DegenerateScale("all points coincide; rescaled distances are undefined")
    if P.exact:
        scaled = [v / dmax for v in vals]
    else:
        # an exact 1 for the maximum regardless of rounding
        scaled = [1.0 if v == dmax else v / dmax for v in vals]
    return DistanceMultiset.from_values(scaled, P.exact, tol)


def same_distribution(A: DistanceMultiset, B: DistanceMultiset, tol: float = 0.0) -> bool:
    """Compare the expanded sorted value sequences (exact equality in exact mode)."""
    if A.total != B.total:
        return False
    if A.exact and B.exact:
        return A.entries == B.entries
    return all(abs(float(a) - float(b)) <= tol for a, b in zip(A.values(), B.values()))


def has_repeated_distances(P: PointConfig, tol: float | None = None) -> bool:
    """True when two pairs share a squared distance (within ``tol`` in float mode)."""
    if P.n < 2:
        raise ValueError("need at least two points")
    vals = np.sort(pair_distances(P))
    if len(vals) < 2:
        return False
    if P.exact:
        return bool(any(a == b for a, b in zip(vals[:-1], vals[1:])))
    if tol is None:
        tol = DEFAULT_MERGE_TOL * float(vals[-1])
    return bool(np.any(np.diff(vals) <= tol))


@dataclass(frozen=True, eq=False)
class RigidMotion:
    """p -> M p + T with M orthogonal (reflections allowed)."""

    M: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.M)
        T = np.asarray(self.T)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or T.shape != (M.shape[0],):
            raise ValueError("M must be m x m and T an m-vector")
        MtM = M.T @ M
        eye = np.eye(M.shape[0])
        if M.dtype == object:
            if not all(MtM[i, j] == eye[i, j] for i in range(M.shape[0]) for j in range(M.shape[0])):
                raise ValueError("M is not orthogonal")
        elif not np.allclose(MtM.astype(float), eye, atol=1e-9):
            raise ValueError("M is not orthogonal")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "T", T)

    @property
    def m(self) -> int:
        return self.M.shape[0]

    @property
    def orientation(self) -> int:
        det = np.linalg.det(self.M.astype(float))
        return 1 if det > 0 else -1

    @classmethod
    def identity(cls, m: int) -> "RigidMotion":
        return cls(np.eye(m), np.zeros(m))

    @classmethod
    def rotation2d(cls, theta: float, shift=(0.0, 0.0), reflect: bool = False) -> "RigidMotion":
        c, s = math.cos(theta), math.sin(theta)
        M = np.array([[c, -s], [s, c]])
        if reflect:
            M = M @ np.diag([1.0, -1.0])
        return cls(M, np.asarray(shift, dtype=float))

    @classmethod
    def exact2d(cls, a: int, b: int, shift=(0, 0), reflect: bool = False) -> "RigidMotion":
        """Rational rotation with cos = a/c, sin = b/c, c = sqrt(a^2 + b^2) integral."""
        c = math.isqrt(a * a + b * b)
        if c * c != a * a + b * b:
            raise ValueError("(a, b) must be the legs of a Pythagorean triple")
        co, si = Fraction(a, c), Fraction(b, c)
        M = np.array([[co, -si], [si, co]], dtype=object)
        if reflect:
            M = np.array([[co, si], [si, -co]], dtype=object)
        T = np.array([Fraction(v) for v in shift], dtype=object)
        return cls(M, T)


def apply_rigid_motion(P: PointConfig, g: RigidMotion) -> PointConfig:
    """q_i = M p_i + T. Stays exact only if both P and the motion are exact."""
    if g.m != P.m:
        raise ValueError(f"motion acts on R^{g.m}, configuration lives in R^{P.m}")
    exact = P.exact and g.M.dtype == object and g.T.dtype == object
    if exact:
        Q = P.coords @ g.M.T + g.T
    else:
        Q = P.coords.astype(float) @ g.M.astype(float).T + g.T.astype(float)
    return PointConfig.from_points(Q.tolist(), exact=exact)


def _procrustes(A: np.ndarray, B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonal M and T minimising ||A M^T + T - B|| (reflections allowed)."""
    ca, cb = A.mean(axis=0), B.mean(axis=0)
    H = (A - ca).T @ (B - cb)
    U, _, Vt = np.linalg.svd(H)
    M = (U @ Vt).T
    return M, cb - M @ ca


def congruent(P: PointConfig, Q: PointConfig, tol: float = 1e-9):
    """Find a relabeling pi and motion with M p_i + T = q_pi(i) within ``tol``.

    Brute force over relabelings in lexicographic order (pruned by pairwise
    distances), so the returned pi is the smallest valid one. Meant as an
    oracle for small n. Returns ``(pi, RigidMotion)`` or ``None``.
    """
    if P.m != Q.m or P.n != Q.n:
        raise ValueError("configurations must have the same n and m")
    A = P.coords.astype(float)
    B = Q.coords.astype(float)
    n = P.n
    DA = np.sqrt(squared_distance_matrix(P.as_float()))
    DB = np.sqrt(squared_distance_matrix(Q.as_float()))
    slack = 2 * tol + 1e-12 * max(1.0, float(DA.max(initial=0.0)))
    pi = [-1] * n
    used = [False] * n

    def extend(i):
        if i == n:
            M, T = _procrustes(A, B[pi])
            err = np.sqrt(((A @ M.T + T - B[pi]) ** 2).sum(axis=1)).max(initial=0.0)
            return (M, T) if err <= tol else None
        for c in range(n):
            if used[c]:
                continue
            if all(abs(DA[i, k] - DB[c, pi[k]]) <= slack for k in range(i)):
                pi[i] = c
                used[c] = True
                found = extend(i + 1)
                if found is not None:
                    return found
                used[c] = False
        pi[i] = -1
        return None

    found = extend(0)
    if found is None:
        return None
    M, T = found
    return tuple(pi), RigidMotion(M, T)
