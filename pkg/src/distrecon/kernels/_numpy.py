"""Pure-numpy kernels mirroring ``_numba``.

Besides serving as the fallback backend these also accept ``dtype=object``
arrays of Python ints, which is how exact inputs too large for int64 are
handled regardless of the selected backend.
"""
from functools import lru_cache
from itertools import islice, permutations

import numpy as np

_CHUNK = 1 << 16


def _g(u, v, w, x, y, z):
    return (2 * u * u * z + 2 * u * v * x - 2 * u * v * y - 2 * u * v * z
            - 2 * u * x * w - 2 * u * x * z + 2 * u * y * w - 2 * u * y * z
            - 2 * u * w * z + 2 * u * z * z + 2 * v * v * y - 2 * v * x * y
            - 2 * v * x * w + 2 * v * y * y - 2 * v * y * w - 2 * v * y * z
            + 2 * v * w * z + 2 * x * x * w - 2 * x * y * w + 2 * x * y * z
            + 2 * x * w * w - 2 * x * w * z)


@lru_cache(maxsize=8)
def _perm_rows(size, k):
    rows = np.fromiter(
        (i for p in permutations(range(size), k) for i in p), dtype=np.int64
    )
    return rows.reshape(-1, k)


def _perm_chunks(size, k):
    # small tables are cached whole, large ones streamed
    count = 1
    for j in range(k):
        count *= size - j
    if count * k <= 4_000_000:
        yield _perm_rows(size, k)
        return
    it = permutations(range(size), k)
    while True:
        block = np.fromiter(
            (i for p in islice(it, _CHUNK) for i in p), dtype=np.int64
        )
        if block.size == 0:
            return
        yield block.reshape(-1, k)


def _reduce_scan(gvals, eps, stop_first, state):
    """Fold one chunk of consecutive tuple values into the running state."""
    ag = np.abs(gvals)
    hit = np.flatnonzero(ag <= eps)
    if state["first"] < 0 and hit.size:
        h = int(hit[0])
        state["first"] = state["cnt"] + h
        state["hit"] = (h, gvals[h])
        if stop_first:
            ag = ag[: h + 1]
            state["cnt"] += h + 1
            state["stop"] = True
        else:
            state["cnt"] += len(gvals)
    else:
        state["cnt"] += len(gvals)
    if len(ag):
        cur = ag.min()
        if state["best"] is None or cur < state["best"]:
            state["best"] = cur


def _scan(dvec, outer, pair_of, K, evaluate, eps, stop_first, init):
    T = outer.shape[0]
    P = dvec.shape[0]
    first = np.full(T, -1, np.int64)
    wit = np.full((T, K), -1, np.int64)
    minabs = np.full(T, init, dtype=dvec.dtype)
    gval = np.zeros(T, dtype=dvec.dtype)
    checked = np.zeros(T, np.int64)
    for t in range(T):
        s1 = pair_of[outer[t, 0], outer[t, 1]]
        sk = pair_of[outer[t, 0], outer[t, 2]]
        avail = np.array([p for p in range(P) if p != s1 and p != sk], dtype=np.int64)
        state = {"first": -1, "cnt": 0, "best": None, "stop": False}
        for rows in _perm_chunks(P - 2, K):
            mids = avail[rows]
            cols = [np.full(len(mids), dvec[s1], dtype=dvec.dtype)]
            cols += [dvec[mids[:, r]] for r in range(K)]
            cols.append(np.full(len(mids), dvec[sk], dtype=dvec.dtype))
            gvals = evaluate(cols)
            before = state["first"]
            _reduce_scan(gvals, eps, stop_first, state)
            if before < 0 <= state["first"]:
                h, g = state["hit"]
                wit[t] = mids[h]
                gval[t] = g
            if state["stop"]:
                break
        first[t] = state["first"]
        if state["best"] is not None:
            minabs[t] = state["best"]
        checked[t] = state["cnt"]
    return first, wit, gval, minabs, checked


def scan_g2d(dvec, outer, pair_of, eps, stop_first, init):
    return _scan(dvec, outer, pair_of, 4, lambda c: _g(*c), eps, stop_first, init)


def leibniz_columns(cols, eidx, perms, signs):
    """Determinant of the (m+1)x(m+1) relation matrix, row-vectorised."""
    m1 = perms.shape[1]
    mat = [[None] * m1 for _ in range(m1)]
    for r in range(m1):
        for c in range(m1):
            if r == c:
                mat[r][c] = -2 * cols[eidx[r, c, 1]]
            else:
                mat[r][c] = cols[eidx[r, c, 0]] - cols[eidx[r, c, 1]] - cols[eidx[r, c, 2]]
    total = 0
    for p in range(perms.shape[0]):
        term = int(signs[p]) * mat[0][perms[p, 0]]
        for r in range(1, m1):
            term = term * mat[r][perms[p, r]]
        total = total + term
    return total


def scan_gm(dvec, outer, pair_of, K, eidx, perms, signs, eps, stop_first, init):
    def evaluate(cols):
        return leibniz_columns(cols, eidx, perms, signs)

    return _scan(dvec, outer, pair_of, K, evaluate, eps, stop_first, init)


def scan_g_batch(dvals, tuples, eps, init):
    N = dvals.shape[0]
    first = np.full(N, -1, np.int64)
    minabs = np.full(N, init, dtype=dvals.dtype)
    step = max(1, (1 << 20) // max(1, tuples.shape[0]))
    for lo in range(0, N, step):
        block = dvals[lo:lo + step]
        vals = _g(*(block[:, tuples[:, s]] for s in range(6)))
        ag = np.abs(vals)
        hit = ag <= eps
        any_hit = hit.any(axis=1)
        first[lo:lo + step] = np.where(any_hit, hit.argmax(axis=1), -1)
        minabs[lo:lo + step] = ag.min(axis=1)
    return first, minabs


def adjacency_scan(P, masks, tri_a, tri_b, cap):
    out = []
    total = 0
    it = permutations(range(P))
    while True:
        block = np.fromiter((i for p in islice(it, _CHUNK) for i in p), dtype=np.int64)
        if block.size == 0:
            break
        block = block.reshape(-1, P)
        total += len(block)
        img = masks[block]
        ok = np.all((img[:, tri_a] & img[:, tri_b]) != 0, axis=1)
        out.append(block[ok])
    found = np.concatenate(out) if out else np.empty((0, P), np.int64)
    if len(found) > cap:
        return found[:cap], total, -1
    return found, total, len(found)
