"""Numba-jitted implementations of the hot kernels.

Importing this module requires numba; the package falls back to the pure
Python backend when it is missing (see kernels/__init__.py). Algorithms
and traversal orders match backend_python exactly so witnesses agree.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _q_value(masks, n, prev, v):
    sub = prev | (np.int64(1) << v)
    comp = np.int64(1) << v
    reach = np.int64(0)
    frontier = comp
    while frontier != 0:
        grow = np.int64(0)
        for u in range(n):
            if (frontier >> u) & 1:
                grow |= masks[u]
        reach |= grow
        newcomp = comp | (grow & sub)
        frontier = newcomp & ~comp
        comp = newcomp
    return _popcount(reach & ~sub)


@njit(cache=True)
def tw_dp_table(masks, n):
    size = 1 << n
    dp = np.full(size, 127, dtype=np.int8)
    dp[0] = -1
    for s in range(1, size):
        best = 127
        for v in range(n):
            if (s >> v) & 1:
                prev = s & ~(1 << v)
                q = _q_value(masks, n, np.int64(prev), v)
                cand = dp[prev] if dp[prev] > q else q
                if cand < best:
                    best = cand
        dp[s] = best
    return dp


@njit(cache=True)
def mis_search(masks, n):
    full = (np.int64(1) << n) - 1
    best_size = 0
    best_mask = np.int64(0)
    cap = 2 * n + 8
    st_p = np.zeros(cap, dtype=np.int64)
    st_mask = np.zeros(cap, dtype=np.int64)
    st_size = np.zeros(cap, dtype=np.int64)
    top = 0
    st_p[0] = full
    top = 1
    while top > 0:
        top -= 1
        p = st_p[top]
        cur_mask = st_mask[top]
        cur_size = st_size[top]
        while True:
            low = -1
            for v in range(n):
                if (p >> v) & 1:
                    if _popcount(masks[v] & p) <= 1:
                        low = v
                        break
            if low < 0:
                break
            cur_mask |= np.int64(1) << low
            cur_size += 1
            p &= ~(masks[low] | (np.int64(1) << low))
        if p == 0:
            if cur_size > best_size:
                best_size = cur_size
                best_mask = cur_mask
            continue
        if cur_size + _popcount(p) <= best_size:
            continue
        pivot = -1
        pivot_deg = -1
        for v in range(n):
            if (p >> v) & 1:
                d = _popcount(masks[v] & p)
                if d > pivot_deg:
                    pivot_deg = d
                    pivot = v
        st_p[top] = p & ~(np.int64(1) << pivot)
        st_mask[top] = cur_mask
        st_size[top] = cur_size
        top += 1
        st_p[top] = p & ~(masks[pivot] | (np.int64(1) << pivot))
        st_mask[top] = cur_mask | (np.int64(1) << pivot)
        st_size[top] = cur_size + 1
        top += 1
    return best_size, best_mask


@njit(cache=True)
def maxsat_scan(pos, neg, n):
    total = np.int64(1) << n
    m = len(pos)
    best_count = -1
    best_mask = np.int64(0)
    for a in range(total):
        count = 0
        for c in range(m):
            if (a & pos[c]) != 0 or (~a & neg[c]) != 0:
                count += 1
        if count > best_count:
            best_count = count
            best_mask = a
    return best_count, best_mask
