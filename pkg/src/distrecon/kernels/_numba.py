"""numba kernels for the hot enumeration loops.

Every kernel is compiled per dtype: int64 for exact (integerised) data and
float64 for float mode. All outputs are per outer index so that a parallel
run reduces to the same result as a serial one.
"""
import numpy as np
from numba import njit, prange


@njit(inline="always", cache=True)
def _g(u, v, w, x, y, z):
    return (2 * u * u * z + 2 * u * v * x - 2 * u * v * y - 2 * u * v * z
            - 2 * u * x * w - 2 * u * x * z + 2 * u * y * w - 2 * u * y * z
            - 2 * u * w * z + 2 * u * z * z + 2 * v * v * y - 2 * v * x * y
            - 2 * v * x * w + 2 * v * y * y - 2 * v * y * w - 2 * v * y * z
            + 2 * v * w * z + 2 * x * x * w - 2 * x * y * w + 2 * x * y * z
            + 2 * x * w * w - 2 * x * w * z)


@njit(parallel=True, cache=True)
def scan_g2d(dvec, outer, pair_of, eps, stop_first, init):
    T = outer.shape[0]
    P = dvec.shape[0]
    first = np.full(T, -1, np.int64)
    wit = np.full((T, 4), -1, np.int64)
    minabs = np.full(T, init)
    gval = np.zeros_like(minabs)
    checked = np.zeros(T, np.int64)
    for t in prange(T):
        s1 = pair_of[outer[t, 0], outer[t, 1]]
        s6 = pair_of[outer[t, 0], outer[t, 2]]
        u = dvec[s1]
        z = dvec[s6]
        cnt = 0
        best = init
        done = False
        for a in range(P):
            if a == s1 or a == s6:
                continue
            v = dvec[a]
            for b in range(P):
                if b == s1 or b == s6 or b == a:
                    continue
                w = dvec[b]
                for c in range(P):
                    if c == s1 or c == s6 or c == a or c == b:
                        continue
                    x = dvec[c]
                    for e in range(P):
                        if e == s1 or e == s6 or e == a or e == b or e == c:
                            continue
                        g = _g(u, v, w, x, dvec[e], z)
                        cnt += 1
                        ag = abs(g)
                        if ag < best:
                            best = ag
                        if ag <= eps and first[t] < 0:
                            first[t] = cnt - 1
                            wit[t, 0] = a
                            wit[t, 1] = b
                            wit[t, 2] = c
                            wit[t, 3] = e
                            gval[t] = g
                            if stop_first:
                                done = True
                                break
                    if done:
                        break
                if done:
                    break
            if done:
                break
        minabs[t] = best
        checked[t] = cnt
    return first, wit, gval, minabs, checked


@njit(inline="always", cache=True)
def _leibniz(flat, eidx, perms, signs, mat):
    m1 = mat.shape[0]
    for r in range(m1):
        for c in range(m1):
            if r == c:
                mat[r, c] = -2 * flat[eidx[r, c, 1]]
            else:
                mat[r, c] = flat[eidx[r, c, 0]] - flat[eidx[r, c, 1]] - flat[eidx[r, c, 2]]
    total = mat[0, 0] - mat[0, 0]
    for p in range(perms.shape[0]):
        term = mat[0, perms[p, 0]] * signs[p]
        for r in range(1, m1):
            term = term * mat[r, perms[p, r]]
        total += term
    return total


@njit(parallel=True, cache=True)
def scan_gm(dvec, outer, pair_of, K, eidx, perms, signs, eps, stop_first, init):
    T = outer.shape[0]
    P = dvec.shape[0]
    A = P - 2
    m1 = perms.shape[1]
    first = np.full(T, -1, np.int64)
    wit = np.full((T, K), -1, np.int64)
    minabs = np.full(T, init)
    gval = np.zeros_like(minabs)
    checked = np.zeros(T, np.int64)
    for t in prange(T):
        s1 = pair_of[outer[t, 0], outer[t, 1]]
        sk = pair_of[outer[t, 0], outer[t, 2]]
        avail = np.empty(A, np.int64)
        q = 0
        for p in range(P):
            if p != s1 and p != sk:
                avail[q] = p
                q += 1
        flat = np.zeros(K + 2, dvec.dtype)
        mat = np.zeros((m1, m1), dvec.dtype)
        flat[0] = dvec[s1]
        flat[K + 1] = dvec[sk]
        used = np.zeros(A, np.bool_)
        pos = np.full(K, -1, np.int64)
        depth = 0
        cnt = 0
        best = init
        while depth >= 0:
            j = pos[depth]
            if j >= 0:
                used[j] = False
            j += 1
            while j < A and used[j]:
                j += 1
            if j == A:
                pos[depth] = -1
                depth -= 1
                continue
            pos[depth] = j
            used[j] = True
            flat[depth + 1] = dvec[avail[j]]
            if depth < K - 1:
                depth += 1
                continue
            g = _leibniz(flat, eidx, perms, signs, mat)
            cnt += 1
            ag = abs(g)
            if ag < best:
                best = ag
            if ag <= eps and first[t] < 0:
                first[t] = cnt - 1
                for r in range(K):
                    wit[t, r] = avail[pos[r]]
                gval[t] = g
                if stop_first:
                    break
        minabs[t] = best
        checked[t] = cnt
    return first, wit, gval, minabs, checked


@njit(parallel=True, cache=True)
def scan_g_batch(dvals, tuples, eps, init):
    N = dvals.shape[0]
    T = tuples.shape[0]
    first = np.full(N, -1, np.int64)
    minabs = np.full(N, init)
    for r in prange(N):
        best = init
        for t in range(T):
            g = _g(dvals[r, tuples[t, 0]], dvals[r, tuples[t, 1]], dvals[r, tuples[t, 2]],
                   dvals[r, tuples[t, 3]], dvals[r, tuples[t, 4]], dvals[r, tuples[t, 5]])
            ag = abs(g)
            if ag < best:
                best = ag
            if ag <= eps and first[r] < 0:
                first[r] = t
        minabs[r] = best
    return first, minabs


@njit(cache=True)
def adjacency_scan(P, masks, tri_a, tri_b, cap):
    """All permutations of range(P), lexicographic, that keep every
    (tri_a[t], tri_b[t]) image pair overlapping."""
    perm = np.arange(P)
    out = np.empty((cap, P), np.int64)
    found = 0
    total = 0
    while True:
        total += 1
        ok = True
        for t in range(tri_a.shape[0]):
            if masks[perm[tri_a[t]]] & masks[perm[tri_b[t]]] == 0:
                ok = False
                break
        if ok:
            if found == cap:
                return out[:found], total, -1
            out[found, :] = perm
            found += 1
        # next lexicographic permutation
        i = P - 2
        while i >= 0 and perm[i] >= perm[i + 1]:
            i -= 1
        if i < 0:
            break
        j = P - 1
        while perm[j] <= perm[i]:
            j -= 1
        tmp = perm[i]
        perm[i] = perm[j]
        perm[j] = tmp
        lo = i + 1
        hi = P - 1
        while lo < hi:
            tmp = perm[lo]
            perm[lo] = perm[hi]
            perm[hi] = tmp
            lo += 1
            hi -= 1
    return out[:found], total, found
