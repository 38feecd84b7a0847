"""Tests for the end-to-end independent-set and MaxSAT pipelines."""

import pytest

from twcut.cnf import CnfFormula, count_satisfied
from twcut.decomposition import greedy_decomposition, make_nice
from twcut.generators import (NoiseSpec, add_noise_clauses, add_noise_edges,
                              gen_grid, gen_planar_cnf)
from twcut.graph import Graph, build_factor_graph
from twcut.oracles import exact_maxsat, exact_mis
from twcut.pipelines import (MaxSatParams, MisParams, MisReport, maxsat_dp,
                             noisy_maxsat, noisy_mis, solve_after_deletion)


def _planar_formulas(count):
    out = []
    seed = 0
    while len(out) < count:
        k = 2 if seed % 2 == 0 else 3
        n = 4 + (seed % 12)
        m = 3 + (seed * 7) % 28
        try:
            out.append(gen_planar_cnf(n, m, k, seed=seed))
        except ValueError:
            pass
        seed += 1
    return out


def test_maxsat_dp_matches_exact_oracle():
    for phi in _planar_formulas(30):
        t = greedy_decomposition(build_factor_graph(phi))
        got, assign = maxsat_dp(phi, t)
        want, _ = exact_maxsat(phi)
        assert got == want
        assert count_satisfied(phi, assign) == got


def test_maxsat_dp_degenerate_formulas():
    empty = CnfFormula(3, [])
    count, assign = maxsat_dp(empty,
                              greedy_decomposition(build_factor_graph(empty)))
    assert count == 0
    assert assign == (False, False, False)

    one = CnfFormula(2, [[1, -2]])
    count, assign = maxsat_dp(one,
                              greedy_decomposition(build_factor_graph(one)))
    assert count == 1
    assert count_satisfied(one, assign) == 1

    contra = CnfFormula(1, [[1], [-1]])
    count, _ = maxsat_dp(contra,
                         greedy_decomposition(build_factor_graph(contra)))
    assert count == 1


def test_maxsat_dp_accepts_plain_and_nice_decompositions():
    phi = gen_planar_cnf(6, 8, 2, seed=3)
    t = greedy_decomposition(build_factor_graph(phi))
    plain = maxsat_dp(phi, t)
    nice = maxsat_dp(phi, make_nice(t))
    assert plain == nice


def test_maxsat_dp_rejects_foreign_decomposition():
    phi = gen_planar_cnf(6, 8, 2, seed=3)
    other = CnfFormula(2, [[1, 2]])
    t_other = greedy_decomposition(build_factor_graph(other))
    with pytest.raises(ValueError, match="does not match the factor graph"):
        maxsat_dp(phi, t_other)


def test_maxsat_dp_enforces_width_cap():
    phi = gen_planar_cnf(8, 8, 3, seed=1)
    t = greedy_decomposition(build_factor_graph(phi))
    assert t.width() > 1
    with pytest.raises(ValueError, match="exceeds the DP cap"):
        maxsat_dp(phi, t, width_cap=1)


def test_noisy_mis_edgeless_keeps_everything():
    rep = noisy_mis(Graph(5, []), MisParams(s=2, beta=0.3))
    assert rep.solution == frozenset(range(5))
    assert rep.objective == 5
    assert rep.x_second == frozenset()


def test_noisy_mis_on_clean_grid_meets_deletion_bound():
    g = gen_grid(4)
    alpha = len(exact_mis(g))
    assert alpha == 8
    rep = noisy_mis(g, MisParams(s=4, beta=0.3, a_policy=(0, 1, 2),
                                 repeats=6, seed=0))
    assert isinstance(rep, MisReport)
    assert rep.objective >= alpha - len(rep.x_second)
    assert rep.objective == len(rep.solution)
    assert rep.solution.isdisjoint(rep.x_second)
    for size in rep.component_sizes:
        assert size <= 4
    for (u, v) in g.edges:
        assert not (u in rep.solution and v in rep.solution)


def test_noisy_mis_on_noisy_grid():
    g, _added = add_noise_edges(gen_grid(4), NoiseSpec(delta=0.1, seed=2))
    rep = noisy_mis(g, MisParams(s=4, beta=0.3, a_policy=(0, 1, 2),
                                 repeats=6, seed=1))
    alpha = len(exact_mis(g))
    assert rep.objective >= alpha - len(rep.x_second)


def test_noisy_mis_is_deterministic():
    g = gen_grid(3)
    params = MisParams(s=3, beta=0.3, repeats=4, seed=5)
    assert noisy_mis(g, params) == noisy_mis(g, params)


def test_mis_params_validation_and_preset():
    with pytest.raises(ValueError, match="positive"):
        MisParams(s=0, beta=0.3)
    with pytest.raises(ValueError, match="beta"):
        MisParams(s=2, beta=0.0)
    with pytest.raises(ValueError, match="repeats"):
        MisParams(s=2, beta=0.3, repeats=0)
    with pytest.raises(ValueError, match="params"):
        noisy_mis(Graph(1, []), {"s": 2})
    preset = MisParams.from_epsilon(0.5)
    assert preset.s == 16
    assert preset.beta == pytest.approx(0.5)
    tweaked = MisParams.from_epsilon(0.5, repeats=3)
    assert tweaked.repeats == 3
    with pytest.raises(ValueError, match="epsilon"):
        MisParams.from_epsilon(1.5)


def test_noisy_maxsat_exact_when_factor_graph_is_thin():
    chain = CnfFormula(5, [[i + 1, i + 2] for i in range(4)])
    exact, _ = exact_maxsat(chain)
    rep = noisy_maxsat(chain, 1)
    assert rep.deleted_clauses == ()
    assert rep.objective == exact
    assert count_satisfied(chain, rep.assignment) == exact


def test_noisy_maxsat_guarantee_on_noisy_planar_formula():
    base = gen_planar_cnf(15, 18, 3, seed=5)
    phi, _added = add_noise_clauses(base, NoiseSpec(delta=2 / base.m, seed=7))
    exact, _ = exact_maxsat(phi)
    for w in (1, 2):
        rep = noisy_maxsat(phi, w)
        assert rep.objective >= exact - len(rep.deleted_clauses)
        assert rep.stats["satisfied_in_original"] >= rep.objective
        assert rep.stats["kept"] + len(rep.deleted_clauses) == phi.m
        assert len(rep.assignment) == phi.n


def test_noisy_maxsat_is_deterministic():
    phi = gen_planar_cnf(8, 10, 2, seed=9)
    assert noisy_maxsat(phi, 1) == noisy_maxsat(phi, 1)


def test_noisy_maxsat_params_validation():
    phi = gen_planar_cnf(6, 6, 2, seed=0)
    with pytest.raises(ValueError, match="params"):
        noisy_maxsat(phi, 1, params={"seed": 0})


def test_solve_after_deletion_drops_hit_clauses():
    phi = gen_planar_cnf(10, 12, 2, seed=4)
    h = build_factor_graph(phi)
    exact, _ = exact_maxsat(phi)
    doomed = sorted(h.edges)[:2]
    h_cut = Graph(h.n, h.edges - frozenset(doomed),
                  vertex_labels=h.vertex_labels)
    t = greedy_decomposition(h_cut)
    count, assign, deleted, stats = solve_after_deletion(
        phi, frozenset(doomed), t)
    hit = {(e[0] if e[0] >= phi.n else e[1]) - phi.n for e in doomed}
    assert set(deleted) == hit
    assert count >= exact - len(deleted)
    assert stats["kept"] == phi.m - len(deleted)
    assert count_satisfied(phi, assign) == stats["satisfied_in_original"]


def test_solve_after_deletion_rejects_non_bipartite_edges():
    phi = gen_planar_cnf(6, 6, 2, seed=0)
    t = greedy_decomposition(build_factor_graph(phi))
    with pytest.raises(RuntimeError, match="not variable-to-clause"):
        solve_after_deletion(phi, frozenset({(0, 1)}), t)
