import numpy as np
import pytest

from twcut import kernels
from twcut.kernels import backend_python

from helpers import (brute_mis_size, complete_graph, cycle_graph, path_graph,
                     random_graph, seeded_rng)


def _masks(g):
    return kernels.neighbor_masks(g.adj, g.n)


def test_dispatch_modes(monkeypatch):
    monkeypatch.setenv("TWCUT_KERNELS", "numpy")
    assert kernels.backend_name() == "numpy"
    monkeypatch.setenv("TWCUT_KERNELS", "bogus")
    with pytest.raises(ValueError):
        kernels.active_backend()
    monkeypatch.setenv("TWCUT_KERNELS", "numba")
    if kernels.HAS_NUMBA:
        assert kernels.backend_name() == "numba"
    else:
        with pytest.raises(RuntimeError):
            kernels.active_backend()


def test_neighbor_masks_rejects_oversize():
    with pytest.raises(ValueError):
        kernels.neighbor_masks({}, 63)


def test_tw_table_small_values():
    g = path_graph(4)
    dp = backend_python.tw_dp_table(_masks(g), 4)
    assert dp[0] == -1
    assert dp[(1 << 4) - 1] == 1
    k4 = complete_graph(4)
    dp = backend_python.tw_dp_table(_masks(k4), 4)
    assert dp[(1 << 4) - 1] == 3


def test_mis_known_values():
    assert backend_python.mis_search(_masks(cycle_graph(5)), 5)[0] == 2
    assert backend_python.mis_search(_masks(complete_graph(6)), 6)[0] == 1
    assert backend_python.mis_search(_masks(path_graph(6)), 6)[0] == 3


def test_mis_matches_brute_force():
    rng = seeded_rng(17)
    for _ in range(25):
        g = random_graph(rng, rng.randrange(1, 13), rng.random() * 0.7)
        size, mask = backend_python.mis_search(_masks(g), g.n)
        assert size == brute_mis_size(g)
        chosen = [v for v in range(g.n) if (mask >> v) & 1]
        assert len(chosen) == size
        for u in chosen:
            for v in chosen:
                if u < v:
                    assert not g.has_edge(u, v)


def test_maxsat_scan_simple():
    # (x1 or x2) and (not x1): both satisfiable at x1=0, x2=1
    count, mask = backend_python.maxsat_scan([0b01 | 0b10, 0], [0, 0b01], 2)
    assert count == 2
    assert mask == 0b10


@pytest.mark.skipif(not kernels.HAS_NUMBA, reason="numba not importable")
def test_backends_agree_bit_for_bit():
    from twcut.kernels import backend_numba
    rng = seeded_rng(29)
    for _ in range(10):
        g = random_graph(rng, rng.randrange(1, 10), 0.4)
        masks = _masks(g)
        dp_py = backend_python.tw_dp_table(masks, g.n)
        dp_nb = backend_numba.tw_dp_table(
            np.asarray(masks, dtype=np.int64), g.n)
        assert list(dp_py) == [int(x) for x in dp_nb]
        assert backend_python.mis_search(masks, g.n) == tuple(
            int(x) for x in backend_numba.mis_search(
                np.asarray(masks, dtype=np.int64), g.n))
    for _ in range(10):
        n = rng.randrange(1, 8)
        m = rng.randrange(1, 10)
        pos = [rng.randrange(1 << n) for _ in range(m)]
        neg = []
        for p in pos:
            q = rng.randrange(1 << n) & ~p
            neg.append(q)
        got_py = backend_python.maxsat_scan(pos, neg, n)
        got_nb = backend_numba.maxsat_scan(
            np.asarray(pos, dtype=np.int64),
            np.asarray(neg, dtype=np.int64), n)
        assert got_py == tuple(int(x) for x in got_nb)
