"""Permutations of index pairs and the adjacency characterisation of relabelings.

A ``PairPermutation`` on n points stores, for each pair in lexicographic
order, the index of its image pair. Point indices are 0-based internally
and 1-based in JSON.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import kernels
from .geometry import PairKey, PointConfig, pair_distances, pair_index_table, pairs

MAX_ENUM_N = 5


@dataclass(frozen=True)
class PairPermutation:
    n: int
    images: tuple[int, ...]

    def __post_init__(self):
        P = math.comb(self.n, 2)
        if len(self.images) != P or sorted(self.images) != list(range(P)):
            raise ValueError("images must be a permutation of the C(n,2) pair indices")

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping) -> "PairPermutation":
        """Build from ``{(i, j): (a, b)}`` with 0-based indices, any pair order."""
        table = pair_index_table(n)
        images = [-1] * math.comb(n, 2)
        for src, dst in mapping.items():
            images[table[src[0], src[1]]] = int(table[dst[0], dst[1]])
        return cls(n, tuple(images))

    @classmethod
    def identity(cls, n: int) -> "PairPermutation":
        return cls(n, tuple(range(math.comb(n, 2))))

    def __call__(self, a: int, b: int) -> PairKey:
        """Image of the pair {a, b}."""
        table = pair_index_table(self.n)
        return pairs(self.n)[self.images[table[a, b]]]

    def image_pairs(self) -> list[PairKey]:
        plist = pairs(self.n)
        return [plist[k] for k in self.images]

    def compose(self, other: "PairPermutation") -> "PairPermutation":
        """(self o other) . e = self . (other . e)"""
        if other.n != self.n:
            raise ValueError("cannot compose permutations on different n")
        return PairPermutation(self.n, tuple(self.images[k] for k in other.images))

    def inverse(self) -> "PairPermutation":
        inv = [0] * len(self.images)
        for k, v in enumerate(self.images):
            inv[v] = k
        return PairPermutation(self.n, tuple(inv))

    def to_json(self) -> str:
        plist = pairs(self.n)
        return json.dumps([[plist[k].one_based(), plist[v].one_based()]
                           for k, v in enumerate(self.images)])

    @classmethod
    def from_json(cls, n: int, text: str) -> "PairPermutation":
        items = json.loads(text)
        return cls.from_mapping(n, {(s[0] - 1, s[1] - 1): (d[0] - 1, d[1] - 1) for s, d in items})


def induced_pair_permutation(pi: Sequence[int]) -> PairPermutation:
    """phi . {i, j} = {pi(i), pi(j)}."""
    pi = list(pi)
    n = len(pi)
    if sorted(pi) != list(range(n)):
        raise ValueError("pi must be a permutation of range(n)")
    table = pair_index_table(n)
    return PairPermutation(n, tuple(int(table[pi[i], pi[j]]) for i, j in combinations(range(n), 2)))


def satisfies_adjacency(phi: PairPermutation) -> bool:
    """phi.{i,j} and phi.{i,k} meet for all pairwise distinct i, j, k."""
    img = phi.image_pairs()
    table = pair_index_table(phi.n)
    for i in range(phi.n):
        for j in range(phi.n):
            for k in range(phi.n):
                if len({i, j, k}) < 3:
                    continue
                if not set(img[table[i, j]]) & set(img[table[i, k]]):
                    return False
    return True


def satisfies_n4_extra(phi: PairPermutation) -> bool:
    """Triple intersection over the three pairs at every base index (n = 4 only)."""
    if phi.n != 4:
        raise ValueError("the extra condition is defined for n = 4")
    img = phi.image_pairs()
    table = pair_index_table(4)
    for i in range(4):
        others = [j for j in range(4) if j != i]
        common = set(img[table[i, others[0]]])
        for j in others[1:]:
            common &= set(img[table[i, j]])
        if not common:
            return False
    return True


def as_relabeling(phi: PairPermutation) -> tuple[int, ...] | None:
    """The point permutation inducing phi, or None if phi is not a relabeling.

    sigma(i) is taken as the single point common to all images of pairs
    containing i.
    """
    n = phi.n
    if n <= 2:
        return tuple(range(n))
    img = phi.image_pairs()
    table = pair_index_table(n)
    sigma = []
    for i in range(n):
        common = None
        for j in range(n):
            if j != i:
                s = set(img[table[i, j]])
                common = s if common is None else common & s
        if len(common) != 1:
            return None
        sigma.append(common.pop())
    if sorted(sigma) != list(range(n)):
        return None
    if induced_pair_permutation(sigma) != phi:
        return None
    return tuple(sigma)


def counterexample_n4() -> PairPermutation:
    """Adjacency-preserving pair permutation on 4 points that is not a relabeling."""
    one_based = {(1, 2): (1, 2), (1, 3): (1, 3), (1, 4): (2, 3),
                 (2, 3): (1, 4), (2, 4): (2, 4), (3, 4): (3, 4)}
    return PairPermutation.from_mapping(
        4, {(a - 1, b - 1): (c - 1, d - 1) for (a, b), (c, d) in one_based.items()}
    )


def enumerate_pair_permutations(n: int) -> Iterator[PairPermutation]:
    """All C(n,2)! pair permutations in lexicographic order (n <= 5)."""
    if n > MAX_ENUM_N:
        raise ValueError(
            f"n = {n} would mean {math.comb(n, 2)}! pair permutations; only n <= {MAX_ENUM_N} is enumerable"
        )
    for images in permutations(range(math.comb(n, 2))):
        yield PairPermutation(n, images)


def _adjacency_tables(n: int):
    plist = pairs(n)
    masks = np.array([(1 << p.i) | (1 << p.j) for p in plist], dtype=np.int64)
    table = pair_index_table(n)
    tri_a, tri_b = [], []
    for i in range(n):
        for j in range(n):
            for k in range(j + 1, n):
                if i != j and i != k:
                    tri_a.append(table[i, j])
                    tri_b.append(table[i, k])
    return masks, np.array(tri_a, dtype=np.int64), np.array(tri_b, dtype=np.int64)


def adjacency_permutations(n: int, cap: int = 1_000_000) -> tuple[np.ndarray, int]:
    """Brute-force scan of all C(n,2)! permutations for the adjacency condition.

    Returns ``(images, scanned)`` where each row of ``images`` is a satisfying
    permutation (lexicographic order) and ``scanned`` counts permutations visited.
    """
    if n > MAX_ENUM_N:
        raise ValueError(f"brute force over pair permutations is limited to n <= {MAX_ENUM_N}")
    P = math.comb(n, 2)
    if P == 0:
        return np.zeros((1, 0), dtype=np.int64), 1
    masks, tri_a, tri_b = _adjacency_tables(n)
    found, scanned, count = kernels.adjacency_scan(P, masks, tri_a, tri_b, cap)
    if count < 0:
        raise RuntimeError(f"more than {cap} adjacency-preserving permutations")
    return np.asarray(found), int(scanned)


def distribution_preserving_permutations(P: PointConfig, Q: PointConfig) -> Iterator[PairPermutation]:
    """Every phi with d'_{e} = d_{phi . e} for all pairs e (d from P, d' from Q).

    Built by matching pairs within equal-value groups, so the number generated
    is the product of factorials of the multiplicities.
    """
    if not (P.exact and Q.exact):
        raise ValueError("distribution-preserving permutations need exact configurations")
    if P.n != Q.n:
        raise ValueError("configurations must have the same number of points")
    dP = pair_distances(P).tolist()
    dQ = pair_distances(Q).tolist()
    if sorted(dP) != sorted(dQ):
        return
    groups_P: dict[Fraction, list[int]] = {}
    groups_Q: dict[Fraction, list[int]] = {}
    for k, v in enumerate(dP):
        groups_P.setdefault(v, []).append(k)
    for k, v in enumerate(dQ):
        groups_Q.setdefault(v, []).append(k)
    values = sorted(groups_Q)
    choices = [permutations(groups_P[v]) for v in values]
    for assignment in product(*(list(c) for c in choices)):
        images = [0] * len(dQ)
        for v, targets in zip(values, assignment):
            for src, dst in zip(groups_Q[v], targets):
                images[src] = dst
        yield PairPermutation(P.n, tuple(images))


def realizable_in_dim(d, m: int, tol: float | None = None) -> bool:
    """Whether a squared-distance matrix comes from n points in R^m.

    Uses the Gram matrix G(a, b) = (d(0,a) + d(0,b) - d(a,b)) / 2 based at
    point 0, which must be positive semidefinite of rank <= m. Exact input
    (ints/Fractions) is decided exactly; float input uses eigenvalues with
    cutoff ``tol`` (default ``1e-9 * max|G|``).
    """
    D = np.asarray(d, dtype=object if _is_exact(d) else float)
    n = D.shape[0]
    if D.shape != (n, n):
        raise ValueError("distance matrix must be square")
    for i in range(n):
        if D[i, i] != 0:
            raise ValueError("distance matrix must have a zero diagonal")
        for j in range(n):
            if D[i, j] != D[j, i]:
                raise ValueError("distance matrix must be symmetric")
            if D[i, j] < 0:
                raise ValueError("squared distances must be non-negative")
    if n <= 1:
        return True
    G = [[(D[0, a] + D[0, b] - D[a, b]) / 2 for b in range(1, n)] for a in range(1, n)]
    if D.dtype == object:
        rank = _exact_psd_rank([[Fraction(x) for x in row] for row in G])
        return rank is not None and rank <= m
    G = np.array(G, dtype=float)
    ev = np.linalg.eigvalsh(G)
    if tol is None:
        tol = 1e-9 * max(1.0, float(np.abs(G).max()))
    if ev.min() < -tol:
        return False
    return int((ev > tol).sum()) <= m


def _is_exact(d) -> bool:
    arr = np.asarray(d, dtype=object)
    return all(isinstance(x, (int, Fraction, np.integer)) for x in arr.ravel())


def _exact_psd_rank(G: list[list[Fraction]]) -> int | None:
    """Rank of a symmetric rational matrix if it is PSD, else None.

    Symmetric elimination with diagonal pivots: a negative pivot, or a zero
    diagonal with a nonzero row, rules out semidefiniteness.
    """
    A = [row[:] for row in G]
    active = list(range(len(A)))
    rank = 0
    while active:
        piv = next((i for i in active if A[i][i] > 0), None)
        if piv is None:
            for i in active:
                if A[i][i] < 0 or any(A[i][j] != 0 for j in active):
                    return None
            return rank
        active.remove(piv)
        p = A[piv][piv]
        for i in active:
            f = A[i][piv] / p
            if f:
                for j in active:
                    A[i][j] -= f * A[piv][j]
        rank += 1
    return rank
