"""Shared test utilities: small graph builders and slow reference
implementations used as independent oracles."""

import itertools
import random

from twcut.cnf import CnfFormula
from twcut.graph import Graph, edge_key


def path_graph(k):
    return Graph(k, [(i, i + 1) for i in range(k - 1)])


def cycle_graph(k):
    return Graph(k, [(i, (i + 1) % k) for i in range(k)])


def complete_graph(k):
    return Graph(k, itertools.combinations(range(k), 2))


def grid_graph(rows, cols):
    """Row-major grid: vertex (r, c) gets id r*cols + c."""
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def complete_bipartite(a, b):
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def random_graph(rng, n, p):
    edges = [e for e in itertools.combinations(range(n), 2)
             if rng.random() < p]
    return Graph(n, edges)


def random_cnf(rng, n, m, k):
    clauses = []
    while len(clauses) < m:
        vs = rng.sample(range(1, n + 1), k)
        clause = [v if rng.random() < 0.5 else -v for v in vs]
        clauses.append(clause)
    return CnfFormula(n, clauses)


def bfs_components(vertices, edges):
    """Reference component finder, independent of the package's."""
    adj = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = set()
    comps = []
    for start in sorted(vertices):
        if start in seen:
            continue
        comp = set()
        queue = [start]
        seen.add(start)
        while queue:
            cur = queue.pop()
            comp.add(cur)
            for nxt in adj[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        comps.append(frozenset(comp))
    return comps


def boundary_edges_by_filter(edges, component, deleted):
    """Reference for boundary_subgraph's edge rule."""
    deleted = {edge_key(*e) for e in deleted}
    out = set()
    for u, v in edges:
        e = edge_key(u, v)
        if e in deleted:
            continue
        if u in component or v in component:
            out.add(e)
    return out


def brute_mis_size(g):
    """Maximum independent set size by subset enumeration (n <= 18)."""
    assert g.n <= 18
    edges = list(g.edges)
    best = 0
    for mask in range(1 << g.n):
        ok = True
        for u, v in edges:
            if (mask >> u) & 1 and (mask >> v) & 1:
                ok = False
                break
        if ok:
            best = max(best, bin(mask).count("1"))
    return best


def brute_maxsat_count(phi):
    """Best satisfied-clause count by enumerating assignments (n <= 16)."""
    assert phi.n <= 16
    best = 0
    for bits in itertools.product([False, True], repeat=phi.n):
        count = 0
        for clause in phi.clauses:
            for lit in clause:
                val = bits[abs(lit) - 1]
                if (lit > 0) == val:
                    count += 1
                    break
        best = max(best, count)
    return best


def seeded_rng(seed):
    return random.Random(seed)
