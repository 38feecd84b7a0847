"""Pure Python / numpy implementations of the hot kernels.

Same recurrences and traversal orders as the numba backend so results
(including witnesses) are bit-identical, but organized around Python ints
and numpy block operations instead of jitted loops.
"""

import numpy as np


def tw_dp_table(nbr_masks, n):
    """Subset DP over elimination prefixes.

    dp[S] = best possible value of max(|reachable boundary|) over orders
    that eliminate exactly the vertices of S first; dp[full] is the
    treewidth. Returns the full table as a list of ints (dp[0] = -1).
    """
    masks = [int(m) for m in nbr_masks]
    size = 1 << n
    dp = [127] * size
    dp[0] = -1
    for s in range(1, size):
        best = 127
        rem = s
        while rem:
            v = (rem & -rem).bit_length() - 1
            rem &= rem - 1
            prev = s & ~(1 << v)
            q = _q_value(masks, prev, v)
            cand = dp[prev] if dp[prev] > q else q
            if cand < best:
                best = cand
        dp[s] = best
    return dp


def _q_value(masks, prev, v):
    # size of the outside neighborhood of v's component in the graph
    # induced on prev | {v}
    sub = prev | (1 << v)
    comp = 1 << v
    reach = 0
    frontier = comp
    while frontier:
        grow = 0
        f = frontier
        while f:
            u = (f & -f).bit_length() - 1
            f &= f - 1
            grow |= masks[u]
        reach |= grow
        newcomp = comp | (grow & sub)
        frontier = newcomp & ~comp
        comp = newcomp
    outside = reach & ~sub
    return bin(outside).count("1")


def mis_search(nbr_masks, n):
    """Branch and bound maximum independent set.

    Returns (size, vertex bitmask). Pivots on the highest-degree vertex,
    folds degree <= 1 vertices greedily, prunes on size + |candidates|.
    """
    masks = [int(m) for m in nbr_masks]
    full = (1 << n) - 1
    best_size = 0
    best_mask = 0
    stack = [(full, 0, 0)]
    while stack:
        p, cur_mask, cur_size = stack.pop()
        while True:
            low = -1
            f = p
            while f:
                v = (f & -f).bit_length() - 1
                f &= f - 1
                if bin(masks[v] & p).count("1") <= 1:
                    low = v
                    break
            if low < 0:
                break
            cur_mask |= 1 << low
            cur_size += 1
            p &= ~(masks[low] | (1 << low))
        if p == 0:
            if cur_size > best_size:
                best_size = cur_size
                best_mask = cur_mask
            continue
        if cur_size + bin(p).count("1") <= best_size:
            continue
        pivot = -1
        pivot_deg = -1
        f = p
        while f:
            v = (f & -f).bit_length() - 1
            f &= f - 1
            d = bin(masks[v] & p).count("1")
            if d > pivot_deg:
                pivot_deg = d
                pivot = v
        stack.append((p & ~(1 << pivot), cur_mask, cur_size))
        stack.append((p & ~(masks[pivot] | (1 << pivot)),
                      cur_mask | (1 << pivot), cur_size + 1))
    return best_size, best_mask


def maxsat_scan(pos_masks, neg_masks, n):
    """Exhaustive MAX-SAT over all 2^n assignments, processed in numpy
    blocks. Returns (best satisfied count, assignment bitmask); ties go to
    the numerically smallest assignment."""
    pos = np.asarray(pos_masks, dtype=np.int64)
    neg = np.asarray(neg_masks, dtype=np.int64)
    total = 1 << n
    block = min(total, 1 << 16)
    best_count = -1
    best_mask = 0
    for base in range(0, total, block):
        assigns = np.arange(base, min(base + block, total), dtype=np.int64)
        counts = np.zeros(len(assigns), dtype=np.int32)
        for c in range(len(pos)):
            sat = ((assigns & pos[c]) != 0) | ((~assigns & neg[c]) != 0)
            counts += sat
        i = int(np.argmax(counts))
        if counts[i] > best_count:
            best_count = int(counts[i])
            best_mask = int(assigns[i])
    return best_count, best_mask
