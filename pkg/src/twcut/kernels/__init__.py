"""Kernel dispatch.

The expensive search loops (treewidth subset DP, independent set branch
and bound, MAX-SAT scan) exist twice: a numba-jitted backend and a pure
Python/numpy backend. The TWCUT_KERNELS environment variable picks one:

  auto   use numba when importable, else the Python backend (default)
  numba  require the jitted backend, error if numba is missing
  numpy  force the Python/numpy backend

Both backends use identical traversal orders, so the returned witnesses
(not just the optimal values) agree bit for bit.
"""

import os

import numpy as np

from . import backend_python

try:
    from . import backend_numba
    HAS_NUMBA = True
except ImportError:
    backend_numba = None
    HAS_NUMBA = False


def active_backend():
    mode = os.environ.get("TWCUT_KERNELS", "auto")
    if mode == "numpy":
        return backend_python
    if mode == "numba":
        if not HAS_NUMBA:
            raise RuntimeError(
                "TWCUT_KERNELS=numba but the numba backend failed to import")
        return backend_numba
    if mode == "auto":
        return backend_numba if HAS_NUMBA else backend_python
    raise ValueError(
        "TWCUT_KERNELS must be one of auto, numba, numpy (got %r)" % mode)


def backend_name():
    b = active_backend()
    return "numba" if b is backend_numba else "numpy"


def neighbor_masks(adjacency, n):
    """Pack an adjacency mapping {v: iterable of neighbors} into an
    int64 bitmask array indexed by consecutive ids 0..n-1."""
    if n > 62:
        raise ValueError("bitmask kernels support at most 62 vertices")
    masks = np.zeros(n, dtype=np.int64)
    for v in range(n):
        m = 0
        for u in adjacency.get(v, ()):
            m |= 1 << u
        masks[v] = m
    return masks


def tw_dp_table(masks, n):
    return active_backend().tw_dp_table(np.asarray(masks, dtype=np.int64), n)


def mis_search(masks, n):
    size, mask = active_backend().mis_search(
        np.asarray(masks, dtype=np.int64), n)
    return int(size), int(mask)


def maxsat_scan(pos_masks, neg_masks, n):
    count, mask = active_backend().maxsat_scan(
        np.asarray(pos_masks, dtype=np.int64),
        np.asarray(neg_masks, dtype=np.int64), n)
    return int(count), int(mask)
