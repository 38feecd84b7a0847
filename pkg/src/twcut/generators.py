"""Seeded instance generators: planar bases plus adversarial noise.

All randomness flows through numpy's default_rng on the caller-provided
seed, so identical parameters give identical instances.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import Delaunay

from .cnf import CnfFormula
from .graph import Graph, build_factor_graph, edge_key
from .oracles import is_planar

NOISE_MODES = ("random-uniform", "embedded-expander", "clustered")


@dataclass(frozen=True)
class NoiseSpec:
    delta: float
    seed: int
    mode: str = "random-uniform"

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        if self.mode not in NOISE_MODES:
            raise ValueError("mode must be one of %s" % (NOISE_MODES,))


def gen_grid(k):
    """k-by-k grid, row-major ids."""
    if k < 1:
        raise ValueError("side length must be >= 1")
    edges = []
    for r in range(k):
        for c in range(k):
            v = r * k + c
            if c + 1 < k:
                edges.append((v, v + 1))
            if r + 1 < k:
                edges.append((v, v + k))
    return Graph(k * k, edges)


def _delaunay_edges(points):
    tri = Delaunay(points)
    edges = set()
    for simplex in tri.simplices:
        for a, b in itertools.combinations(sorted(int(x) for x in simplex), 2):
            edges.add((a, b))
    return sorted(edges), tri


def _spanning_tree(n, edges):
    adj = {v: [] for v in range(n)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for v in adj:
        adj[v].sort()
    tree = set()
    seen = {0}
    queue = [0]
    while queue:
        cur = queue.pop(0)
        for nxt in adj[cur]:
            if nxt not in seen:
                seen.add(nxt)
                tree.add(edge_key(cur, nxt))
                queue.append(nxt)
    return tree


def gen_random_planar(n, seed):
    """Random connected planar graph: Delaunay triangulation of random
    points, keeping a spanning tree plus a coin-flip subsample of the
    remaining triangulation edges."""
    if n < 3:
        raise ValueError("need n >= 3")
    rng = np.random.default_rng(seed)
    points = rng.random((n, 2))
    edges, _ = _delaunay_edges(points)
    tree = _spanning_tree(n, edges)
    kept = set(tree)
    for e in edges:
        if e not in tree and rng.random() < 0.5:
            kept.add(e)
    g = Graph(n, kept)
    if not is_planar(g):
        raise AssertionError("Delaunay subgraph failed the planarity check")
    return g


def _non_edges(g, within=None):
    verts = sorted(within) if within is not None else range(g.n)
    return [e for e in itertools.combinations(verts, 2) if e not in g.edges]


def add_noise_edges(g, spec):
    """Add exactly floor(delta*n) fresh edges. Returns (noisy graph,
    the added edge set). The added set is ground truth for evaluation
    only; solvers never see it."""
    count = int(math.floor(spec.delta * g.n))
    rng = np.random.default_rng(spec.seed)
    pool = _non_edges(g)
    if count > len(pool):
        raise ValueError("requested %d noisy edges but only %d non-edges"
                         % (count, len(pool)))
    if count == 0:
        return g, frozenset()
    if spec.mode == "random-uniform":
        picks = rng.choice(len(pool), size=count, replace=False)
        new = {pool[int(i)] for i in picks}
    elif spec.mode == "embedded-expander":
        new = _expander_patch(g, rng, count, pool)
    else:
        new = _clustered_edges(g, rng, count, pool)
    assert len(new) == count and not (new & g.edges)
    return Graph(g.n, g.edges | new, vertex_labels=g.vertex_labels), \
        frozenset(new)


def _expander_patch(g, rng, count, pool):
    """A small near-3-regular patch: cycle plus chords on ~2/3*count
    vertices; collisions with existing edges fall back to uniform picks."""
    w_size = min(g.n, max(3, math.ceil(2 * count / 3)))
    w = sorted(int(v) for v in rng.choice(g.n, size=w_size, replace=False))
    order = [w[int(i)] for i in rng.permutation(w_size)]
    candidates = []
    for i in range(w_size):
        candidates.append(edge_key(order[i], order[(i + 1) % w_size]))
    tries = 0
    while len(candidates) < 2 * count and tries < 50 * count + 50:
        a, b = rng.choice(w_size, size=2, replace=False)
        e = edge_key(order[int(a)], order[int(b)])
        if e not in candidates:
            candidates.append(e)
        tries += 1
    new = set()
    for e in candidates:
        if len(new) == count:
            break
        if e not in g.edges and e not in new:
            new.add(e)
    if len(new) < count:
        rest = [e for e in pool if e not in new]
        picks = rng.choice(len(rest), size=count - len(new), replace=False)
        new |= {rest[int(i)] for i in picks}
    return new


def _clustered_edges(g, rng, count, pool):
    """Densify a BFS ball around a random center."""
    center = int(rng.integers(g.n))
    order = [center]
    seen = {center}
    i = 0
    while i < len(order):
        for nxt in sorted(g.adj[order[i]]):
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
        i += 1
    for v in range(g.n):
        if v not in seen:
            order.append(v)
    ball = []
    local = []
    for v in order:
        ball.append(v)
        local = _non_edges(g, ball)
        if len(local) >= count:
            break
    perm = rng.permutation(len(local))
    new = {local[int(i)] for i in perm[:count]}
    return new


def gen_planar_cnf(n, m, k, seed):
    """Planar k-CNF over a Delaunay variable layout.

    k=2: each clause sits on a triangulation edge (repeats allowed;
    parallel clause vertices nest inside the same face).
    k=3: each clause sits inside its own triangulation face, one per
    face, so clause edges never cross. The factor graph is re-checked
    for planarity either way.
    """
    if k not in (2, 3):
        raise ValueError("only arities 2 and 3 are supported")
    if n < 3:
        raise ValueError("need n >= 3")
    if m < 1:
        raise ValueError("need m >= 1")
    rng = np.random.default_rng(seed)
    points = rng.random((n, 2))
    edges, tri = _delaunay_edges(points)
    clauses = []
    if k == 2:
        for _ in range(m):
            u, v = edges[int(rng.integers(len(edges)))]
            clauses.append(_signed(rng, (u, v)))
    else:
        faces = sorted(tuple(sorted(int(x) for x in s)) for s in tri.simplices)
        if m > len(faces):
            raise ValueError("m=%d infeasible: only %d triangulation faces"
                             % (m, len(faces)))
        picks = rng.choice(len(faces), size=m, replace=False)
        for i in sorted(int(x) for x in picks):
            clauses.append(_signed(rng, faces[i]))
    phi = CnfFormula(n, clauses)
    if not is_planar(build_factor_graph(phi)):
        raise AssertionError("factor graph failed the planarity check")
    return phi


def _signed(rng, variables):
    return [int(v) + 1 if rng.random() < 0.5 else -(int(v) + 1)
            for v in variables]


def add_noise_clauses(phi, spec):
    """Append exactly floor(delta*m) arity-k noisy clauses. Returns
    (noisy formula, indices of the added clauses)."""
    k = phi.k
    count = int(math.floor(spec.delta * phi.m))
    if count == 0:
        return phi, frozenset()
    if k < 1 or k > phi.n:
        raise ValueError("cannot build arity-%d clauses over %d variables"
                         % (k, phi.n))
    rng = np.random.default_rng(spec.seed)
    if spec.mode == "embedded-expander":
        w_size = min(phi.n, max(k + 1, math.ceil(count / 2)))
        pool = sorted(int(v) for v in
                      rng.choice(phi.n, size=w_size, replace=False))
    else:
        pool = list(range(phi.n))
    new = []
    for _ in range(count):
        if spec.mode == "clustered" and phi.m > 0:
            base = phi.variables_of(int(rng.integers(phi.m)))
            near = set(base)
            for ci in range(phi.m):
                if phi.variables_of(ci) & near:
                    near |= phi.variables_of(ci)
            cands = sorted(near)
            if len(cands) < k:
                cands = pool
        else:
            cands = pool
        vs = [cands[int(i)] for i in
              rng.choice(len(cands), size=k, replace=False)]
        new.append(_signed(rng, sorted(vs)))
    out = CnfFormula(phi.n, list(phi.clauses) + new)
    return out, frozenset(range(phi.m, phi.m + count))
