"""Batch kernels over diagram partner arrays.

Every kernel has a numba implementation and a pure-numpy implementation with
identical results.  Numba is used when importable unless the environment
variable ``VTL_DISABLE_NUMBA`` is set to a non-empty value other than ``0``.

Partner arrays are int64 of shape ``(rows, 2n)``: columns ``0..n-1`` are the
top points, ``n..2n-1`` the bottom points.  When ``a`` is stacked on ``b``,
bottom point ``n+m`` of ``a`` is glued to top point ``m`` of ``b``.

Diagram ranks are positions in lexicographic order of partner arrays, which
is the mixed-radix code of the choice made for the smallest unmatched point.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_flag = os.environ.get("VTL_DISABLE_NUMBA", "")
BACKEND = "numba" if HAVE_NUMBA and _flag in ("", "0") else "numpy"

# pairs handled per numpy block; bounds peak memory of the fallback
NUMPY_BLOCK = 1 << 17


def set_backend(name: str) -> None:
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    BACKEND = name


def dimension(n: int) -> int:
    """(2n-1)!!"""
    out = 1
    for k in range(2 * n - 1, 0, -2):
        out *= k
    return out


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _rank_one(p, n2, used):
        for x in range(n2):
            used[x] = False
        rank = 0
        m = n2
        for pt in range(n2):
            if used[pt]:
                continue
            q = p[pt]
            c = 0
            for x in range(pt + 1, q):
                if not used[x]:
                    c += 1
            rank = rank * (m - 1) + c
            used[pt] = True
            used[q] = True
            m -= 2
        return rank

    @njit(cache=True)
    def _pair_keys_nb(A, B, wa, wb, n, L, out):
        # compose and rank are written out inline; separate calls cost ~30%
        na = A.shape[0]
        nb = B.shape[0]
        n2 = 2 * n
        res = np.empty(n2, dtype=np.int64)
        seen = np.empty(n, dtype=np.bool_)
        used = np.empty(n2, dtype=np.bool_)
        for i in range(na):
            for j in range(nb):
                for m in range(n):
                    seen[m] = False
                for x in range(n2):
                    res[x] = -1
                for t in range(n):
                    if res[t] >= 0:
                        continue
                    q = A[i, t]
                    end = q
                    while q >= n:
                        seen[q - n] = True
                        r = B[j, q - n]
                        if r >= n:
                            end = r
                            break
                        seen[r] = True
                        q = A[i, n + r]
                        end = q
                    res[t] = end
                    res[end] = t
                for jj in range(n, n2):
                    if res[jj] >= 0:
                        continue
                    r = B[j, jj]
                    end = r
                    while r < n:
                        seen[r] = True
                        q = A[i, n + r]
                        if q < n:
                            end = q
                            break
                        seen[q - n] = True
                        r = B[j, q - n]
                        end = r
                    res[jj] = end
                    res[end] = jj
                loops = 0
                for m in range(n):
                    if seen[m]:
                        continue
                    loops += 1
                    cur = m
                    while True:
                        seen[cur] = True
                        m2 = A[i, n + cur] - n
                        seen[m2] = True
                        cur = B[j, m2]
                        if cur == m:
                            break
                for x in range(n2):
                    used[x] = False
                rank = 0
                left = n2
                for pt in range(n2):
                    if used[pt]:
                        continue
                    q = res[pt]
                    c = 0
                    for x in range(pt + 1, q):
                        if not used[x]:
                            c += 1
                    rank = rank * (left - 1) + c
                    used[pt] = True
                    used[q] = True
                    left -= 2
                out[i * nb + j] = wa[i] + wb[j] + rank * L + loops

    @njit(cache=True)
    def _accumulate_nb(A, B, wa, wb, n, L, counts):
        nb = B.shape[0]
        buf = np.empty(nb, dtype=np.int64)
        for i in range(A.shape[0]):
            _pair_keys_nb(A[i : i + 1], B, wa[i : i + 1], wb, n, L, buf)
            for j in range(nb):
                counts[buf[j]] += 1

    @njit(cache=True)
    def _rank_rows_nb(P, n):
        out = np.empty(P.shape[0], dtype=np.int64)
        used = np.empty(2 * n, dtype=np.bool_)
        for i in range(P.shape[0]):
            out[i] = _rank_one(P[i], 2 * n, used)
        return out

    @njit(cache=True)
    def _unrank_rows_nb(ranks, n):
        out = np.empty((ranks.shape[0], 2 * n), dtype=np.int64)
        digits = np.empty(n, dtype=np.int64)
        used = np.empty(2 * n, dtype=np.bool_)
        for i in range(ranks.shape[0]):
            r = ranks[i]
            for s in range(n - 1, -1, -1):
                radix = 2 * n - 1 - 2 * s
                digits[s] = r % radix
                r //= radix
            for x in range(2 * n):
                used[x] = False
            pt = 0
            for s in range(n):
                while used[pt]:
                    pt += 1
                c = digits[s]
                q = pt + 1
                while True:
                    if not used[q]:
                        if c == 0:
                            break
                        c -= 1
                    q += 1
                out[i, pt] = q
                out[i, q] = pt
                used[pt] = True
                used[q] = True
        return out

    @njit(cache=True)
    def _closure_loops_nb(P, n):
        out = np.empty(P.shape[0], dtype=np.int64)
        seen = np.empty(2 * n, dtype=np.bool_)
        for i in range(P.shape[0]):
            for x in range(2 * n):
                seen[x] = False
            loops = 0
            for x in range(2 * n):
                if seen[x]:
                    continue
                loops += 1
                cur = x
                while True:
                    seen[cur] = True
                    y = P[i, cur]
                    seen[y] = True
                    cur = y - n if y >= n else y + n
                    if cur == x:
                        break
            out[i] = loops
        return out


# ---------------------------------------------------------------- numpy path


def _take(arr, idx):
    return np.take_along_axis(arr, idx, axis=1)


def _compose_np(a, b, n):
    """Vectorized stacking of rows of ``a`` over rows of ``b``."""
    # tops start in a; bottoms start in b; each walk crosses the middle at most n times
    q = a[:, :n].copy()
    end_top = np.where(q < n, q, -1)
    for _ in range(n):
        active = end_top < 0
        if not active.any():
            break
        r = _take(b, np.where(active, q - n, 0))
        hit = active & (r >= n)
        end_top = np.where(hit, r, end_top)
        cont = active & (r < n)
        q2 = _take(a, np.where(cont, n + r, 0))
        end_top = np.where(cont & (q2 < n), q2, end_top)
        q = np.where(cont, q2, q)

    r = b[:, n:].copy()
    end_bot = np.where(r >= n, r, -1)
    for _ in range(n):
        active = end_bot < 0
        if not active.any():
            break
        q = _take(a, np.where(active, n + r, 0))
        hit = active & (q < n)
        end_bot = np.where(hit, q, end_bot)
        cont = active & (q >= n)
        r2 = _take(b, np.where(cont, q - n, 0))
        end_bot = np.where(cont & (r2 >= n), r2, end_bot)
        r = np.where(cont, r2, r)

    out = np.concatenate([end_top, end_bot], axis=1)

    # closed loops: gamma(m) = b(a(m)) on middle points, sink n for open paths
    qa = a[:, n:]
    sink = qa < n
    rb = _take(b, np.where(sink, 0, qa - n))
    sink |= rb >= n
    g = np.empty((a.shape[0], n + 1), dtype=np.int64)
    g[:, :n] = np.where(sink, n, rb)
    g[:, n] = n
    label = np.broadcast_to(np.arange(n + 1), g.shape).copy()
    span = 1
    while span <= n + 1:
        label = np.minimum(label, _take(label, g))
        g = _take(g, g)
        span *= 2
    on_loop = g[:, :n] != n
    heads = on_loop & (label[:, :n] == np.arange(n))
    loops = heads.sum(axis=1) // 2
    return out, loops


def _rank_np(P, n):
    rows = P.shape[0]
    used = np.zeros((rows, 2 * n), dtype=bool)
    rank = np.zeros(rows, dtype=np.int64)
    idx = np.arange(rows)
    m = 2 * n
    for _ in range(n):
        pt = np.argmin(used, axis=1)
        q = P[idx, pt]
        free = np.cumsum(~used, axis=1)
        c = free[idx, q - 1] - free[idx, pt]
        rank = rank * (m - 1) + c
        used[idx, pt] = True
        used[idx, q] = True
        m -= 2
    return rank


def _unrank_np(ranks, n):
    rows = ranks.shape[0]
    r = ranks.astype(np.int64).copy()
    digits = np.empty((n, rows), dtype=np.int64)
    for s in range(n - 1, -1, -1):
        radix = 2 * n - 1 - 2 * s
        digits[s] = r % radix
        r //= radix
    out = np.empty((rows, 2 * n), dtype=np.int64)
    used = np.zeros((rows, 2 * n), dtype=bool)
    idx = np.arange(rows)
    for s in range(n):
        pt = np.argmin(used, axis=1)
        free = np.cumsum(~used, axis=1)
        # q is the first free point whose free-count exceeds free[pt] + digit
        target = free[idx, pt] + digits[s] + 1
        q = np.argmax(free >= target[:, None], axis=1)
        out[idx, pt] = q
        out[idx, q] = pt
        used[idx, pt] = True
        used[idx, q] = True
    return out


def _closure_loops_np(P, n):
    rows = P.shape[0]
    pts = np.arange(2 * n)
    flip = np.where(pts >= n, pts - n, pts + n)
    g = flip[P]
    label = np.broadcast_to(pts, g.shape).copy()
    span = 1
    while span <= 2 * n:
        label = np.minimum(label, _take(label, g))
        g = _take(g, g)
        span *= 2
    return (label == pts).sum(axis=1) // 2 if rows else np.zeros(0, dtype=np.int64)


def _pair_keys_np(A, B, wa, wb, n, L):
    na, nb = A.shape[0], B.shape[0]
    a = np.repeat(A, nb, axis=0)
    b = np.tile(B, (na, 1))
    res, loops = _compose_np(a, b, n)
    return np.repeat(wa, nb) + np.tile(wb, na) + _rank_np(res, n) * L + loops


def _row_blocks(na, nb):
    step = max(1, NUMPY_BLOCK // max(nb, 1))
    for lo in range(0, na, step):
        yield lo, min(na, lo + step)


# ---------------------------------------------------------------- dispatch


def _as_rows(P):
    return np.ascontiguousarray(P, dtype=np.int64)


def pair_keys(A, B, wa, wb, n: int, L: int) -> np.ndarray:
    """Key ``wa[i] + wb[j] + rank(a_i b_j) * L + loops(a_i b_j)`` for all pairs, row-major."""
    A, B = _as_rows(A), _as_rows(B)
    wa = np.ascontiguousarray(wa, dtype=np.int64)
    wb = np.ascontiguousarray(wb, dtype=np.int64)
    if BACKEND == "numba":
        out = np.empty(A.shape[0] * B.shape[0], dtype=np.int64)
        _pair_keys_nb(A, B, wa, wb, n, L, out)
        return out
    parts = [
        _pair_keys_np(A[lo:hi], B, wa[lo:hi], wb, n, L)
        for lo, hi in _row_blocks(A.shape[0], B.shape[0])
    ]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def accumulate(A, B, wa, wb, n: int, L: int, size: int) -> np.ndarray:
    """Dense histogram of :func:`pair_keys` over ``range(size)``."""
    A, B = _as_rows(A), _as_rows(B)
    wa = np.ascontiguousarray(wa, dtype=np.int64)
    wb = np.ascontiguousarray(wb, dtype=np.int64)
    counts = np.zeros(size, dtype=np.int64)
    if BACKEND == "numba":
        _accumulate_nb(A, B, wa, wb, n, L, counts)
        return counts
    for lo, hi in _row_blocks(A.shape[0], B.shape[0]):
        keys = _pair_keys_np(A[lo:hi], B, wa[lo:hi], wb, n, L)
        uk, c = np.unique(keys, return_counts=True)
        counts[uk] += c
    return counts


def compose_rows(A, B, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Ranks and loop counts of every product ``A[i] B[j]``, shape ``(len(A), len(B))``."""
    A, B = _as_rows(A), _as_rows(B)
    L = n + 1
    keys = pair_keys(A, B, np.zeros(len(A)), np.zeros(len(B)), n, L)
    keys = keys.reshape(len(A), len(B))
    return keys // L, keys % L


def rank_rows(P, n: int) -> np.ndarray:
    P = _as_rows(P).reshape(-1, 2 * n)
    if BACKEND == "numba":
        return _rank_rows_nb(P, n)
    return _rank_np(P, n)


def unrank_rows(ranks, n: int) -> np.ndarray:
    ranks = np.ascontiguousarray(ranks, dtype=np.int64).reshape(-1)
    if BACKEND == "numba":
        return _unrank_rows_nb(ranks, n)
    return _unrank_np(ranks, n)


def closure_loops_rows(P, n: int) -> np.ndarray:
    P = _as_rows(P).reshape(-1, 2 * n)
    if BACKEND == "numba":
        return _closure_loops_nb(P, n)
    return _closure_loops_np(P, n)


def through_strands_rows(P, n: int) -> np.ndarray:
    P = np.asarray(P).reshape(-1, 2 * n)
    return (P[:, :n] >= n).sum(axis=1)
