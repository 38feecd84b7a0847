import itertools

import pytest

from twcut.decomposition import validate
from twcut.graph import Graph
from twcut.oracles import (BudgetExceeded, OracleBudget,
                           exact_balanced_separator, exact_interdiction,
                           exact_maxsat, exact_mis, exact_treewidth,
                           is_planar, link_number,
                           treewidth_branch_and_bound)

from helpers import (brute_maxsat_count, brute_mis_size, complete_bipartite,
                     complete_graph, cycle_graph, grid_graph, path_graph,
                     random_cnf, random_graph, seeded_rng)


def test_treewidth_named_values():
    assert exact_treewidth(path_graph(5))[0] == 1
    assert exact_treewidth(complete_graph(5))[0] == 4
    assert exact_treewidth(cycle_graph(6))[0] == 2


def test_treewidth_4x4_grid():
    assert exact_treewidth(grid_graph(4, 4))[0] == 4


def test_treewidth_witness_validates():
    rng = seeded_rng(31)
    for _ in range(20):
        g = random_graph(rng, rng.randrange(1, 9), 0.4)
        tw, t = exact_treewidth(g)
        assert t.width() == tw
        assert validate(t, g).ok


def test_treewidth_dp_agrees_with_branch_and_bound():
    rng = seeded_rng(37)
    for _ in range(30):
        g = random_graph(rng, rng.randrange(1, 10), rng.random() * 0.8)
        assert exact_treewidth(g)[0] == treewidth_branch_and_bound(g)


def test_treewidth_budget():
    with pytest.raises(BudgetExceeded):
        exact_treewidth(Graph(19, []))
    assert exact_treewidth(Graph(19, []),
                           OracleBudget(max_vertices=19))[0] == 0


def test_mis_named_values():
    assert len(exact_mis(complete_graph(7))) == 1
    assert len(exact_mis(cycle_graph(5))) == 2
    assert len(exact_mis(grid_graph(5, 5))) == 13


def test_mis_matches_brute_force():
    rng = seeded_rng(41)
    for _ in range(20):
        g = random_graph(rng, rng.randrange(1, 13), rng.random() * 0.6)
        got = exact_mis(g)
        assert len(got) == brute_mis_size(g)
        for u in got:
            assert not (g.adj[u] & got)


def test_maxsat_named_values():
    from twcut.cnf import CnfFormula
    assert exact_maxsat(CnfFormula(2, [[1, 2]]))[0] == 1
    assert exact_maxsat(CnfFormula(1, [[1], [-1]]))[0] == 1


def test_maxsat_matches_brute_force():
    rng = seeded_rng(43)
    for _ in range(15):
        phi = random_cnf(rng, rng.randrange(2, 10), rng.randrange(1, 16), 2)
        count, assignment = exact_maxsat(phi)
        assert count == brute_maxsat_count(phi)
        assert len(assignment) == phi.n


def test_balanced_separator_edge_endpoints():
    g = path_graph(2)
    x = exact_balanced_separator(g, {0, 1}, 0.5)
    assert len(x) == 1


def test_balanced_separator_path_middle():
    g = path_graph(3)
    assert exact_balanced_separator(g, {0, 1, 2}, 0.5) == {1}


def test_balanced_separator_two_thirds_is_exact():
    # C6 with S = V and alpha = 2/3: one cut vertex leaves a P5 with
    # 5 > 4 S-vertices, two opposite ones leave two P2s, fine at alpha 1/2
    # already; with alpha = 2/3 a single vertex still fails (5 > 4) so the
    # answer is 2.
    g = cycle_graph(6)
    assert len(exact_balanced_separator(g, range(6), 2 / 3)) == 2


def test_link_number_known_values():
    assert link_number(path_graph(5)) == 1
    assert link_number(cycle_graph(6)) == 2
    assert link_number(complete_graph(4)) == 2
    assert link_number(complete_graph(5)) == 3


def test_link_sandwich_on_k4_and_k5():
    for g in (complete_graph(4), complete_graph(5)):
        link = link_number(g)
        tw = exact_treewidth(g)[0]
        assert link < tw < 4 * link


def test_interdiction_named_values():
    f, t = exact_interdiction(cycle_graph(4), 1)
    assert len(f) == 1
    f, t = exact_interdiction(complete_graph(4), 2)
    assert len(f) == 1
    f, t = exact_interdiction(path_graph(4), 2)
    assert f == frozenset()


def test_interdiction_certificate_and_minimality():
    g = complete_graph(4)
    f, t = exact_interdiction(g, 2)
    remaining = Graph(g.n, g.edges - f)
    assert validate(t, remaining).ok
    assert t.width() <= 2
    for combo in itertools.combinations(sorted(g.edges), len(f) - 1):
        left = Graph(g.n, g.edges - frozenset(combo))
        assert exact_treewidth(left)[0] > 2


def test_interdiction_budget():
    with pytest.raises(BudgetExceeded):
        exact_interdiction(complete_graph(7), 1)


def test_is_planar():
    assert is_planar(complete_graph(4))
    assert not is_planar(complete_graph(5))
    assert not is_planar(complete_bipartite(3, 3))
    assert is_planar(grid_graph(4, 4))
