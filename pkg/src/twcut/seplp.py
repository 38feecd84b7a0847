"""Spreading-metric separation over a terminal set.

Given edge lengths x on a (sub)graph and a terminal set S, finds the cheapest
vertex weighting y whose node-weighted metric spreads S out, or, when that
minimum exceeds the budget w, turns the duals of the generated rows into a
valid cut on x.  Path and spreading rows are both generated lazily; the LP
only ever sees rows the separation routines asked for.
"""

import dataclasses
import heapq
import math

from . import lp as lplib
from .graph import edge_key


def pair_key(u, v):
    """Unordered pair as a sorted tuple; the diagonal (v, v) is allowed."""
    return (u, v) if u <= v else (v, u)


def node_weighted_shortest_paths(h, x, y, source):
    """Dijkstra where a path pays its edge lengths plus every vertex weight
    on it, endpoints included.  Returns (dist, pred); dist[source] = y[source].
    """
    dist = {v: math.inf for v in h.vertices}
    pred = {source: None}
    dist[source] = y[source]
    heap = [(dist[source], source)]
    while heap:
        d_u, u = heapq.heappop(heap)
        if d_u > dist[u]:
            continue
        for v in sorted(h.adj[u]):
            cand = d_u + x[edge_key(u, v)] + y[v]
            if cand < dist[v]:
                dist[v] = cand
                pred[v] = u
                heapq.heappush(heap, (cand, v))
    return dist, pred


def walk_path(pred, source, target):
    """Vertex sequence of the tree path source -> target from predecessors."""
    path = [target]
    while path[-1] != source:
        path.append(pred[path[-1]])
    path.reverse()
    return tuple(path)


def _anchor_worst_prefix(d, s_list, half, anchor, tol):
    """Most violated prefix row for one anchor, as (margin, k, members)."""
    ranked = sorted((d[pair_key(anchor, v)], v)
                    for v in s_list if v != anchor)
    members = [anchor]
    total = d[pair_key(anchor, anchor)]
    best = None
    for k in range(1, len(s_list) + 1):
        if k > 1:
            dist_av, v = ranked[k - 2]
            total += dist_av
            members.append(v)
        rhs = k - half
        if rhs <= 0:
            continue
        margin = total - rhs
        if margin < -tol and (best is None or margin < best[0]):
            best = (margin, k, frozenset(members))
    return best


def separate_spreading(d, s_set, tol=lplib.TOL_CUT):
    """Most violated spreading row, or None.

    Rows have the form sum_{u in T} d[u, anchor] >= |T| - |S|/2 with
    anchor in T.  For each anchor the candidate T of size k is the anchor
    plus the k-1 nearest other terminals; rows whose right side is not
    positive are vacuous and skipped.  Ties break toward the smaller
    anchor id, then the smaller T.
    """
    s_list = sorted(s_set)
    half = len(s_list) / 2.0
    best_key = None
    best_members = None
    for anchor in s_list:
        hit = _anchor_worst_prefix(d, s_list, half, anchor, tol)
        if hit is None:
            continue
        margin, k, members = hit
        key = (margin, anchor, k)
        if best_key is None or key < best_key:
            best_key = key
            best_members = members
    if best_key is None:
        return None
    margin, anchor, _ = best_key
    return best_members, anchor, -margin


def separate_spreading_batch(d, s_set, tol=lplib.TOL_CUT):
    """One most-violated spreading row per anchor, in anchor order."""
    s_list = sorted(s_set)
    half = len(s_list) / 2.0
    out = []
    for anchor in s_list:
        hit = _anchor_worst_prefix(d, s_list, half, anchor, tol)
        if hit is not None:
            out.append((hit[2], anchor, -hit[0]))
    return out


@dataclasses.dataclass(frozen=True)
class SeparatorSolution:
    s_set: frozenset
    y: dict          # vertex -> weight >= 0
    d: dict          # pair_key over S (diagonal included) -> distance in [0, 1]
    objective: float # sum of y


@dataclasses.dataclass(frozen=True)
class DualCertificate:
    s_set: frozenset
    paths: tuple     # ((vertex path, flow f >= 0), ...)
    spreads: tuple   # (((T, anchor), dual g >= 0), ...)
    coeffs: dict     # edge -> c_e = sum of f over paths using the edge
    constant: float  # K = sum of g * (|T| - |S|/2)
    objective: float # optimum of the restricted LP, > w
    cut: lplib.CutInequality


class _RowBook:
    """LP plus a registry of generated rows; refuses repeat requests."""

    def __init__(self, h, x, s_list):
        self.h = h
        self.x = x
        self.s_list = s_list
        self.rows = []
        self._keys = set()
        self.lp = lplib.LinearProgram("min")
        for v in sorted(h.vertices):
            self.lp.add_variable(("y", v), 0.0, None)
        for i, p in enumerate(s_list):
            for q in s_list[i:]:
                self.lp.add_variable(("d", p, q), 0.0, None)
        self.lp.set_objective({("y", v): 1.0 for v in sorted(h.vertices)})

    def _register(self, key):
        if key in self._keys:
            raise lplib.LpError("separation requested an existing row: %r"
                                % (key,))
        self._keys.add(key)

    def add_path_row(self, path):
        # d_pq - sum of y on the path <= sum of x on the path
        self._register(("path", path))
        p, q = pair_key(path[0], path[-1])
        coeffs = {("d", p, q): 1.0}
        for v in set(path):
            coeffs[("y", v)] = coeffs.get(("y", v), 0.0) - 1.0
        rhs = sum(self.x[edge_key(a, b)] for a, b in zip(path, path[1:]))
        self.lp.add_constraint(coeffs, lplib.LESS, rhs)
        self.rows.append(("path", path, rhs))

    def add_spread_row(self, members, anchor):
        # sum_{u in T} d_u,anchor >= |T| - |S|/2
        self._register(("spread", members, anchor))
        coeffs = {}
        for u in members:
            var = ("d",) + pair_key(u, anchor)
            coeffs[var] = coeffs.get(var, 0.0) + 1.0
        rhs = len(members) - len(self.s_list) / 2.0
        self.lp.add_constraint(coeffs, lplib.GREATER, rhs)
        self.rows.append(("spread", (members, anchor), rhs))


def _all_pairs(h, x, y, s_list):
    """Node-weighted shortest paths between all terminal pairs."""
    dists, preds = {}, {}
    for p in s_list:
        dists[p], preds[p] = node_weighted_shortest_paths(h, x, y, p)
    return dists, preds


def _extract_cut(book, sol, s_set, w, x):
    """Read the restricted duals as path flows and spreading duals and
    assemble the cut sum_e c_e x_e >= K - w.  Hard error if strong duality
    or dual feasibility looks broken.
    """
    lam = sol.objective
    n_s = len(s_set)
    paths = []
    spreads = []
    coeffs = {}
    constant = 0.0
    per_vertex = {}
    pair_flow = {}
    pair_dual = {}
    for row, dual in zip(book.rows, sol.duals):
        if row[0] == "path":
            path = row[1]
            flow = max(0.0, -dual)
            if flow == 0.0:
                continue
            paths.append((path, flow))
            for a, b in zip(path, path[1:]):
                e = edge_key(a, b)
                coeffs[e] = coeffs.get(e, 0.0) + flow
            for v in set(path):
                per_vertex[v] = per_vertex.get(v, 0.0) + flow
            pk = pair_key(path[0], path[-1])
            pair_flow[pk] = pair_flow.get(pk, 0.0) + flow
        else:
            members, anchor = row[1]
            g = max(0.0, dual)
            if g == 0.0:
                continue
            spreads.append(((members, anchor), g))
            constant += g * (len(members) - n_s / 2.0)
            for u in members:
                pk = pair_key(u, anchor)
                pair_dual[pk] = pair_dual.get(pk, 0.0) + g

    scale = 1.0 + abs(lam)
    cut_value = sum(c * x[e] for e, c in coeffs.items())
    if abs(lam - (constant - cut_value)) > lplib.TOL_GAP * scale:
        raise lplib.LpError(
            "dual reading off by %.3g: objective %.9g vs K - c.x = %.9g"
            % (abs(lam - (constant - cut_value)), lam, constant - cut_value))
    for v, total in per_vertex.items():
        if total > 1.0 + lplib.TOL_FEAS * scale:
            raise lplib.LpError("path flows through vertex %r sum to %.9g > 1"
                                % (v, total))
    for pk, g_total in pair_dual.items():
        if g_total > pair_flow.get(pk, 0.0) + lplib.TOL_FEAS * scale:
            raise lplib.LpError("spreading duals on pair %r exceed path flow"
                                % (pk,))

    violation = lam - w
    if violation <= lplib.TOL_CUT:
        raise lplib.LpError("null cut: objective %.9g does not exceed "
                            "budget %.9g meaningfully" % (lam, w))
    cut = lplib.CutInequality.make(coeffs, constant - w, origin=frozenset(s_set))
    return DualCertificate(frozenset(s_set), tuple(paths), tuple(spreads),
                           coeffs, constant, lam, cut)


def solve_sep_lp(h, x, s_set, w, max_rounds=None):
    """Feasibility of edge lengths x against terminal set S at budget w.

    Returns SeparatorSolution when the cheapest spreading weight assignment
    has total weight <= w (within tolerance), else a DualCertificate whose
    cut the current x violates.  Both row families are generated lazily.
    """
    s_set = frozenset(s_set)
    if not s_set <= set(h.vertices):
        raise ValueError("terminals must be vertices of the given graph")
    if w < 0:
        raise ValueError("budget w must be nonnegative")
    s_list = sorted(s_set)
    book = _RowBook(h, x, s_list)
    if max_rounds is None:
        max_rounds = 200 + 20 * len(s_list) ** 2

    for _ in range(max_rounds):
        sol = lplib.solve(book.lp)
        if sol.status != "optimal":
            raise lplib.LpError("separation LP is %s" % sol.status)
        y = {v: max(0.0, sol.primal[("y", v)]) for v in sorted(h.vertices)}
        d = {}
        for i, p in enumerate(s_list):
            for q in s_list[i:]:
                d[(p, q)] = sol.primal[("d", p, q)]

        progressed = False
        dists, preds = _all_pairs(h, x, y, s_list)
        for i, p in enumerate(s_list):
            for q in s_list[i:]:
                sp = dists[p][q]
                if d[(p, q)] > sp + lplib.TOL_FEAS:
                    book.add_path_row(walk_path(preds[p], p, q))
                    progressed = True
        if not progressed:
            for members, anchor, _ in separate_spreading_batch(
                    d, s_set, lplib.TOL_CUT):
                book.add_spread_row(members, anchor)
                progressed = True
        if progressed:
            continue

        lam = sol.objective
        if lam > len(s_list) / 2.0 + lplib.TOL_GAP * (1.0 + lam):
            raise lplib.LpError("objective %.9g exceeds |S|/2; the trivial "
                                "half-weighting was missed" % lam)
        if lam <= w + lplib.TOL_CUT:
            d_out = {pk: min(val, 1.0) for pk, val in d.items()}
            hit = separate_spreading(d_out, s_set, 10 * lplib.TOL_FEAS)
            if hit is not None:
                raise lplib.LpError("capping distances at 1 broke a spreading "
                                    "row by %.3g" % hit[2])
            for (p, q), val in d_out.items():
                if val > dists[p][q] + 10 * lplib.TOL_FEAS:
                    raise lplib.LpError("returned d[%r] = %.9g exceeds the "
                                        "shortest path %.9g" % ((p, q), val,
                                                                dists[p][q]))
            return SeparatorSolution(s_set, y, d_out, lam)
        return _extract_cut(book, sol, s_set, w, x)

    raise lplib.LpError("row generation did not converge in %d rounds"
                        % max_rounds)
