"""Brute-force ground truth on small instances.

Every oracle here is exact and fails loudly (BudgetExceeded) instead of
approximating when an instance is too large. Treewidth, MIS, and MAX-SAT
ride on the bitmask kernels; treewidth additionally has an independent
branch-and-bound implementation used to cross-check the DP.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from . import kernels
from .cnf import count_satisfied
from .decomposition import TreeDecomposition, validate
from .graph import Graph, connected_components


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    """Hard caps an oracle refuses to exceed. None means the oracle's
    built-in default for that dimension."""
    max_vertices: int = None
    max_edges: int = None
    max_subsets: int = None


def _cap(budget, field, default):
    if budget is None:
        return default
    value = getattr(budget, field)
    return default if value is None else value


def _require(ok, what):
    if not ok:
        raise BudgetExceeded(what)


def exact_treewidth(g, budget=None):
    """Exact treewidth by subset DP over elimination prefixes.

    Returns (width, witness TreeDecomposition). The empty graph gets
    width -1 with a single empty bag.
    """
    n = g.n
    limit = _cap(budget, "max_vertices", 18)
    _require(n <= limit,
             "exact_treewidth: %d vertices exceeds cap %d" % (n, limit))
    if n == 0:
        return -1, TreeDecomposition({0: None}, {0: frozenset()})
    masks = kernels.neighbor_masks(g.adj, n)
    dp = kernels.tw_dp_table(masks, n)
    tw = int(dp[(1 << n) - 1])
    order = _backtrack_order(masks, n, dp)
    t = _decomposition_from_order(g, order)
    if t.width() != tw:
        raise RuntimeError("treewidth witness has width %d, expected %d"
                           % (t.width(), tw))
    report = validate(t, g)
    if not report.ok:
        raise RuntimeError("treewidth witness invalid: %s" % report.violation)
    return tw, t


def _backtrack_order(masks, n, dp):
    from .kernels.backend_python import _q_value
    mask_list = [int(m) for m in masks]
    s = (1 << n) - 1
    rev = []
    while s:
        target = int(dp[s])
        for v in range(n):
            if (s >> v) & 1:
                prev = s & ~(1 << v)
                q = _q_value(mask_list, prev, v)
                cand = max(int(dp[prev]), q)
                if cand == target:
                    rev.append(v)
                    s = prev
                    break
        else:
            raise RuntimeError("treewidth DP table is inconsistent")
    return list(reversed(rev))


def _decomposition_from_order(g, order):
    """Bags along an elimination order: bag(v) = {v} + later neighbors in
    the fill graph; each bag hangs off the bag of its first-eliminated
    later neighbor."""
    n = g.n
    pos = {v: i for i, v in enumerate(order)}
    fill = {v: set(g.adj[v]) for v in range(n)}
    parents = {}
    bags = {}
    for i, v in enumerate(order):
        later = sorted(u for u in fill[v] if pos[u] > i)
        bags[i] = frozenset([v] + later)
        for a, b in itertools.combinations(later, 2):
            fill[a].add(b)
            fill[b].add(a)
        if later:
            parents[i] = pos[min(later, key=lambda u: pos[u])]
        elif i + 1 < n:
            parents[i] = i + 1
        else:
            parents[i] = None
    return TreeDecomposition(parents, bags)


def _greedy_elimination_width(adj, score):
    adj = {v: set(nbrs) for v, nbrs in adj.items()}
    w = -1
    while adj:
        v = min(adj, key=lambda u: (score(adj, u), u))
        nbrs = adj.pop(v)
        w = max(w, len(nbrs))
        for a in nbrs:
            adj[a].discard(v)
        for a, b in itertools.combinations(sorted(nbrs), 2):
            adj[a].add(b)
            adj[b].add(a)
    return w


def _fill_count(adj, v):
    nbrs = sorted(adj[v])
    missing = 0
    for a, b in itertools.combinations(nbrs, 2):
        if b not in adj[a]:
            missing += 1
    return missing


def _mmd_lower_bound(adj):
    adj = {v: set(nbrs) for v, nbrs in adj.items()}
    lb = 0
    while adj:
        v = min(adj, key=lambda u: (len(adj[u]), u))
        lb = max(lb, len(adj[v]))
        for a in adj.pop(v):
            adj[a].discard(v)
    return lb


def treewidth_branch_and_bound(g, budget=None):
    """Exact treewidth again, by branch and bound over elimination orders
    with simplicial reduction and memoization on the remaining set.
    Independent of the DP kernel; used to cross-check it."""
    n = g.n
    limit = _cap(budget, "max_vertices", 20)
    _require(n <= limit,
             "treewidth_branch_and_bound: %d vertices exceeds cap %d"
             % (n, limit))
    if n == 0:
        return -1
    base = {v: set(g.adj[v]) for v in range(n)}
    ub = min(_greedy_elimination_width(base, _fill_count),
             _greedy_elimination_width(base, lambda a, u: len(a[u])))
    lb = _mmd_lower_bound(base)
    best = [ub]
    if lb == ub:
        return ub
    memo = {}

    def dfs(adj, max_so_far):
        if max_so_far >= best[0]:
            return
        if len(adj) <= max_so_far + 1:
            best[0] = max_so_far
            return
        key = frozenset(adj)
        prev = memo.get(key)
        if prev is not None and prev <= max_so_far:
            return
        memo[key] = max_so_far
        # forced moves: simplicial vertices never hurt
        for v in sorted(adj):
            nbrs = sorted(adj[v])
            if all(b in adj[a] for a, b in itertools.combinations(nbrs, 2)):
                dfs(_eliminated(adj, v), max(max_so_far, len(nbrs)))
                return
        for v in sorted(adj):
            deg = len(adj[v])
            if max(max_so_far, deg) >= best[0]:
                continue
            dfs(_eliminated(adj, v), max(max_so_far, deg))

    dfs(base, lb - 1 if lb > 0 else -1)
    return best[0]


def _eliminated(adj, v):
    out = {u: set(nbrs) for u, nbrs in adj.items() if u != v}
    nbrs = sorted(adj[v])
    for a in nbrs:
        out[a].discard(v)
    for a, b in itertools.combinations(nbrs, 2):
        out[a].add(b)
        out[b].add(a)
    return out


def exact_mis(g, budget=None):
    """Maximum independent set as a frozenset of vertices."""
    n = g.n
    limit = _cap(budget, "max_vertices", 40)
    _require(n <= limit,
             "exact_mis: %d vertices exceeds cap %d" % (n, limit))
    if n == 0:
        return frozenset()
    masks = kernels.neighbor_masks(g.adj, n)
    size, mask = kernels.mis_search(masks, n)
    chosen = frozenset(v for v in range(n) if (mask >> v) & 1)
    if len(chosen) != size:
        raise RuntimeError("MIS witness size mismatch")
    for u in chosen:
        if g.adj[u] & chosen:
            raise RuntimeError("MIS witness is not independent")
    return chosen


def exact_maxsat(phi, budget=None):
    """Optimal satisfied-clause count and a witnessing assignment
    (tuple of bools, index = variable)."""
    n = phi.n
    limit = _cap(budget, "max_vertices", 25)
    _require(n <= limit,
             "exact_maxsat: %d variables exceeds cap %d" % (n, limit))
    if phi.m == 0:
        return 0, tuple([False] * n)
    pos = []
    neg = []
    for clause in phi.clauses:
        p = 0
        q = 0
        for lit in clause:
            if lit > 0:
                p |= 1 << (lit - 1)
            else:
                q |= 1 << (-lit - 1)
        pos.append(p)
        neg.append(q)
    count, mask = kernels.maxsat_scan(pos, neg, n)
    assignment = tuple(bool((mask >> v) & 1) for v in range(n))
    if count_satisfied(phi, assignment) != count:
        raise RuntimeError("MAX-SAT witness does not reach its count")
    return count, assignment


def _balanced(g, s_set, x_set, alpha):
    bound = alpha * len(s_set)
    for comp in connected_components(_drop_vertices(g, x_set)):
        if Fraction(len(comp & s_set)) > bound:
            return False
    return True


def _drop_vertices(g, x_set):
    keep = [v for v in range(g.n) if v not in x_set]
    adj = {v: g.adj[v] - x_set for v in keep}
    return _AdjView(keep, adj)


class _AdjView:
    """Minimal graph view (vertices + adj) for component scans."""

    __slots__ = ("vertices", "adj")

    def __init__(self, vertices, adj):
        self.vertices = vertices
        self.adj = adj


def exact_balanced_separator(g, s_set, alpha, budget=None):
    """Smallest X such that every component of G - X meets S in at most
    alpha*|S| vertices. alpha is snapped to the nearest small-denominator
    rational so the comparison is exact."""
    n = g.n
    limit = _cap(budget, "max_subsets", 1 << 24)
    _require(2 ** n <= limit,
             "exact_balanced_separator: 2^%d subsets exceeds cap" % n)
    s_set = frozenset(s_set)
    alpha = Fraction(alpha).limit_denominator(10 ** 6)
    verts = list(range(n))
    for k in range(n + 1):
        for combo in itertools.combinations(verts, k):
            x_set = frozenset(combo)
            if _balanced(g, s_set, x_set, alpha):
                return x_set
    raise AssertionError("X = V is always balanced")


def link_number(g, budget=None):
    """max over S of (min size of a 1/2-balanced separator of S)."""
    n = g.n
    limit = _cap(budget, "max_vertices", 10)
    _require(n <= limit,
             "link_number: %d vertices exceeds cap %d" % (n, limit))
    if n == 0:
        return 0
    full = (1 << n) - 1
    adj_masks = [0] * n
    for v in range(n):
        m = 0
        for u in g.adj[v]:
            m |= 1 << u
        adj_masks[v] = m
    comps = [None] * (1 << n)
    for x_mask in range(1 << n):
        alive = full & ~x_mask
        pieces = []
        seen = 0
        rest = alive
        while rest:
            start = rest & -rest
            comp = start
            frontier = start
            while frontier:
                grow = 0
                f = frontier
                while f:
                    v = (f & -f).bit_length() - 1
                    f &= f - 1
                    grow |= adj_masks[v]
                newcomp = comp | (grow & alive)
                frontier = newcomp & ~comp
                comp = newcomp
            pieces.append(comp)
            seen |= comp
            rest = alive & ~seen
        comps[x_mask] = pieces
    by_size = sorted(range(1 << n), key=lambda m: (bin(m).count("1"), m))
    best = 0
    for s_mask in range(1, 1 << n):
        s_size = bin(s_mask).count("1")
        for x_mask in by_size:
            if all(2 * bin(piece & s_mask).count("1") <= s_size
                   for piece in comps[x_mask]):
                best = max(best, bin(x_mask).count("1"))
                break
    return best


def exact_interdiction(g, w, budget=None):
    """Minimum edge set F with tw(G - F) <= w, plus the witness
    decomposition of G - F. Enumerates edge subsets smallest-first."""
    m = len(g.edges)
    limit = _cap(budget, "max_edges", 16)
    _require(m <= limit,
             "exact_interdiction: %d edges exceeds cap %d" % (m, limit))
    if w < 0:
        raise ValueError("w must be >= 0")
    tw_budget = OracleBudget(max_vertices=_cap(budget, "max_vertices", 18))
    edges = sorted(g.edges)
    for k in range(m + 1):
        for combo in itertools.combinations(edges, k):
            f_set = frozenset(combo)
            remaining = Graph(g.n, g.edges - f_set,
                              vertex_labels=g.vertex_labels)
            tw, t = exact_treewidth(remaining, tw_budget)
            if tw <= w:
                return f_set, t
    raise AssertionError("deleting all edges always reaches width <= 0")


def is_planar(g):
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges)
    ok, _ = nx.check_planarity(nxg)
    return bool(ok)
