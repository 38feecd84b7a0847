"""Ball growing on the node-weighted metric.

A ball B(s, r) holds the vertices within distance r of s.  A vertex is cut
when the radius lands strictly inside its weight interval [d - y, d); an
edge is cut when the radius lands inside its length interval past the near
endpoint.  Profiles track how boundary sets and contained cost/weight evolve
with the radius, the good-radius search picks the smallest radius in
[0, 1/12] whose boundary is small relative to the contained volume, and
partition repeatedly carves such balls out until at most two thirds of the
terminal set remains, leaving zombie stubs so later phases cannot shortcut
through removed vertices.
"""

import dataclasses
import math

from .graph import Subgraph, connected_components, edge_key
from .seplp import node_weighted_shortest_paths, pair_key

RADIUS_CAP = 1.0 / 12.0
BOUNDARY_CONST = 48.0
_EPS = 1e-12
_SLACK = 1e-9


@dataclasses.dataclass(frozen=True)
class BallSnapshot:
    """Everything about one ball at one radius."""

    r: float
    ball: frozenset        # fully inside: d_v <= r
    covered: frozenset     # ball plus cut vertices
    delta_x: frozenset     # cut edges
    delta_y: frozenset     # cut vertices: d_v - y_v <= r < d_v
    lp_cost: float
    wt: float
    vol_x: float
    vol_y: float
    edge_contributions: dict
    vertex_contributions: dict


class BallProfile:
    """Radius profile of the ball around one center.

    Boundary sets only change at breakpoints (entry/exit radii of vertices
    and edges), so there are at most 2|V'| + 2|E'| of them.  evaluate(r)
    reconstructs the exact snapshot at any radius.
    """

    def __init__(self, center, dist, x, y, edges, w, lp_cost_global, n_global):
        self.center = center
        self.w = w
        self.lp_cost_global = lp_cost_global
        self.n_global = n_global
        self._dist = dist
        self._x = x
        self._y = y
        self._edges = tuple(sorted(edges))
        points = set()
        for v, d in dist.items():
            if math.isinf(d):
                continue
            points.add(d)
            points.add(max(0.0, d - y[v]))
        for (u, v) in self._edges:
            for a in (u, v):
                da = dist[a]
                if math.isinf(da):
                    continue
                points.add(da)
                points.add(da + x[(u, v)])
        self.breakpoints = tuple(sorted(p for p in points if p >= 0.0))

    def evaluate(self, r):
        dist, x, y = self._dist, self._x, self._y
        ball = set()
        delta_y = set()
        for v, d in dist.items():
            if d <= r:
                ball.add(v)
            elif d - y[v] <= r:
                delta_y.add(v)
        covered = ball | delta_y

        delta_x = set()
        edge_contributions = {}
        lp_cost = 0.0
        for e in self._edges:
            u, v = e
            if (dist[u] <= r < dist[u] + x[e]) or (dist[v] <= r < dist[v] + x[e]):
                delta_x.add(e)
            contrib = None
            if (u in ball and v in covered) or (v in ball and u in covered):
                contrib = x[e]
            elif u in ball and v not in covered:
                contrib = r - dist[u]
            elif v in ball and u not in covered:
                contrib = r - dist[v]
            if contrib is not None:
                edge_contributions[e] = contrib
                lp_cost += contrib

        vertex_contributions = {}
        wt = 0.0
        for v in sorted(ball):
            vertex_contributions[v] = y[v]
            wt += y[v]
        for v in sorted(delta_y):
            part = r - (dist[v] - y[v])
            vertex_contributions[v] = part
            wt += part

        vol_x = self.lp_cost_global / self.n_global ** 2 + lp_cost
        vol_y = 1.0 / self.w + wt
        return BallSnapshot(r, frozenset(ball), frozenset(covered),
                            frozenset(delta_x), frozenset(delta_y),
                            lp_cost, wt, vol_x, vol_y,
                            edge_contributions, vertex_contributions)

    def breakpoint_snapshots(self):
        return [self.evaluate(b) for b in self.breakpoints]


def ball_profile(hhat, x, y, center, w=1.0, lp_cost_global=None, n_global=None):
    """Profile of the ball around center in hhat under lengths x, weights y.

    lp_cost_global and n_global are the volume-offset scalars; they default
    to hhat's own totals but callers running a recursion should pass the
    top-level values so volumes telescope across levels.
    """
    if center not in hhat.vertices:
        raise ValueError("center %r is not in the subgraph" % (center,))
    if lp_cost_global is None:
        lp_cost_global = sum(x[e] for e in hhat.edges)
    if n_global is None:
        n_global = hhat.parent.n
    dist, _ = node_weighted_shortest_paths(hhat, x, y, center)
    return BallProfile(center, dist, dict(x), dict(y), hhat.edges,
                       w, lp_cost_global, n_global)


def find_good_radius(profile, n, w):
    """Smallest radius in [0, 1/12] whose boundary sets pass both volume
    conditions; breakpoints and left limits of breakpoints are the only
    candidates that need checking.  Raises RuntimeError when none qualifies,
    which signals an infeasible candidate (x, y) upstream.
    """
    cap_snap = profile.evaluate(RADIUS_CAP)
    vol_x_cap = cap_snap.vol_x
    lnln = math.log(math.log(math.e * (n + 1)))
    y_const = BOUNDARY_CONST * math.log(w * w + 1.0)

    candidates = {0.0, RADIUS_CAP, max(0.0, RADIUS_CAP - _EPS)}
    for b in profile.breakpoints:
        if b > RADIUS_CAP:
            break
        candidates.add(b)
        if b - _EPS > 0.0:
            candidates.add(b - _EPS)

    for r in sorted(candidates):
        snap = profile.evaluate(r)
        if len(snap.delta_y) > y_const * snap.vol_y + _SLACK:
            continue
        if snap.vol_x <= 0.0:
            x_bound = 0.0
        else:
            ratio = max(vol_x_cap / snap.vol_x, 1.0)
            x_bound = (BOUNDARY_CONST * math.log(math.e * ratio)
                       * lnln * snap.vol_x)
        if len(snap.delta_x) > x_bound + _SLACK:
            continue
        return r
    raise RuntimeError("no radius in [0, 1/12] has a small enough boundary "
                       "around vertex %r" % (profile.center,))


@dataclasses.dataclass(frozen=True)
class Region:
    center: int
    radius: float
    vol_x: float
    vol_y: float
    delta_x: frozenset     # deleted edges, translated to original ids
    delta_y: frozenset     # separator vertices, translated to original ids
    interior: frozenset    # ball vertices that are original ids
    covered: frozenset     # ball plus cut vertices, translated


@dataclasses.dataclass(frozen=True)
class PartitionResult:
    x_set: frozenset       # all separator vertices
    d_set: frozenset       # all deleted edges
    regions: tuple
    components: tuple      # connected components of h - X - D


def _carve(work, x_cur, y_cur, snap, zombie_origin, next_z):
    """Remove a ball (with its cut vertices) from the working subgraph.

    Every removed edge whose removed endpoint was merely cut, with the other
    endpoint surviving, leaves behind a zero-weight zombie stub carrying the
    edge's length, so distances in the residual cannot drop below what they
    were.  Returns the new working state.
    """
    removed = snap.covered
    keep = set(work.vertices) - set(removed)
    new_edges = []
    new_origin = {}
    new_x = {}
    new_records = [rec for rec in work.zombie_edges if rec[0] in keep]
    new_y = {v: y_cur[v] for v in keep}
    for e in sorted(work.edges):
        u, v = e
        if u in keep and v in keep:
            new_edges.append(e)
            new_origin[e] = work.edge_origin[e]
            new_x[e] = x_cur[e]
            continue
        for s, t in ((u, v), (v, u)):
            if s in snap.delta_y and t in keep:
                z = next_z
                next_z += 1
                origin_edge = work.edge_origin[e]
                zombie_origin[z] = zombie_origin.get(s, s)
                ze = edge_key(z, t)
                new_edges.append(ze)
                new_origin[ze] = origin_edge
                new_x[ze] = x_cur[e]
                new_records.append((z, t, origin_edge))
                new_y[z] = 0.0
                keep.add(z)
                break
    new_work = Subgraph(work.parent, keep, new_edges,
                        zombie_edges=new_records, edge_origin=new_origin)
    return new_work, new_x, new_y, next_z


def _require(cond, msg):
    if not cond:
        raise RuntimeError("partition post-condition failed: " + msg)


def partition(h, s_set, x, y, w, lp_cost_global=None, n_global=None):
    """Carve good-radius balls around terminals until at most two thirds of
    S remains, then return the union of cut vertices X, cut edges D, the
    regions, and the components of h - X - D.

    Requires w >= 1 and a weight assignment with total at most w (within
    tolerance); each phase centers the ball on the lowest-id surviving
    terminal.
    """
    if w < 1:
        raise ValueError("budget w must be at least 1, got %r" % (w,))
    if h.zombie_edges:
        raise ValueError("input subgraph already contains zombie stubs")
    s_set = frozenset(s_set)
    if not s_set <= set(h.vertices):
        raise ValueError("terminals must be vertices of the subgraph")
    total_y = sum(y[v] for v in h.vertices)
    if total_y > w + 1e-6:
        raise ValueError("total vertex weight %.9g exceeds the budget %.9g"
                         % (total_y, w))
    if lp_cost_global is None:
        lp_cost_global = sum(x[e] for e in h.edges)
    if n_global is None:
        n_global = h.parent.n

    work = h
    x_cur = {e: float(x[e]) for e in h.edges}
    y_cur = {v: float(y[v]) for v in h.vertices}
    zombie_origin = {}
    next_z = max([h.parent.n] + [v + 1 for v in h.vertices])
    alive = set(s_set)
    regions = []
    x_all = set()
    d_all = set()

    while 3 * len(alive) > 2 * len(s_set):
        if len(regions) >= len(s_set):
            raise RuntimeError("more phases than terminals; carving is stuck")
        center = min(alive)
        profile = ball_profile(work, x_cur, y_cur, center, w,
                               lp_cost_global, n_global)
        radius = find_good_radius(profile, n_global, w)
        snap = profile.evaluate(radius)
        _require(center in snap.covered, "center escaped its own ball")

        translate = lambda v: zombie_origin.get(v, v)
        region_x = frozenset(work.edge_origin[e] for e in snap.delta_x)
        region_y = frozenset(translate(v) for v in snap.delta_y)
        interior = frozenset(v for v in snap.ball if v < h.parent.n)
        covered = frozenset(translate(v) for v in snap.covered)
        regions.append(Region(center, radius, snap.vol_x, snap.vol_y,
                              region_x, region_y, interior, covered))
        d_all |= region_x
        x_all |= region_y
        work, x_cur, y_cur, next_z = _carve(work, x_cur, y_cur, snap,
                                            zombie_origin, next_z)
        alive &= set(work.vertices)

    final_vertices = frozenset(v for v in work.vertices if v < h.parent.n)
    final_covered = frozenset(zombie_origin.get(v, v) for v in work.vertices)

    x_set = frozenset(x_all)
    d_set = frozenset(d_all)
    residual_vertices = set(h.vertices) - x_set
    residual_edges = [e for e in h.edges
                      if e not in d_set
                      and e[0] in residual_vertices and e[1] in residual_vertices]
    residual = Subgraph(h.parent, residual_vertices, residual_edges,
                        edge_origin={e: h.edge_origin[e]
                                     for e in residual_edges})
    components = tuple(connected_components(residual))

    # Lemma-style post-conditions; the caller relies on all four.
    seen_interiors = set()
    for reg in regions:
        overlap = seen_interiors & reg.interior
        _require(not overlap, "region interiors overlap on %r" % (overlap,))
        seen_interiors |= reg.interior

    vol_x_h = lp_cost_global / n_global ** 2 + sum(x[e] for e in h.edges)
    d_bound = 0.0
    lnln = math.log(math.log(math.e * (n_global + 1)))
    for reg in regions:
        if reg.vol_x > 0.0:
            ratio = max(vol_x_h / reg.vol_x, 1.0)
            d_bound += (BOUNDARY_CONST * math.log(math.e * ratio)
                        * lnln * reg.vol_x)
    _require(len(d_set) <= d_bound + _SLACK,
             "(1) deleted edges %d exceed the volume bound %.6g"
             % (len(d_set), d_bound))

    x_bound = (BOUNDARY_CONST * math.log(w * w + 1.0)
               * (w + len(s_set) / w))
    _require(len(x_set) <= x_bound + _SLACK,
             "(2) separator size %d exceeds %.6g" % (len(x_set), x_bound))

    for comp in components:
        _require(3 * len(comp & s_set) <= 2 * len(s_set),
                 "(3) a component keeps more than two thirds of the terminals")

    for comp in components:
        homes = [reg for reg in regions if comp <= reg.interior]
        if not homes and comp <= final_vertices:
            homes = ["final"]
        _require(homes, "(4) component %r is in no region and not final"
                 % (sorted(comp)[:8],))
        home = homes[0]
        closure = final_covered if home == "final" else home.covered
        for e in h.edges:
            if e in d_set:
                continue
            if e[0] in comp or e[1] in comp:
                _require(e[0] in closure and e[1] in closure,
                         "(4) edge %r leaks out of the home of its component"
                         % (e,))

    return PartitionResult(x_set, d_set, tuple(regions), components)


def check_radius_diameter(u_set, d, s_set):
    """Numerical form of the radius-diameter fact: a set of diameter at most
    1/6 under a spreading-feasible metric holds at most two thirds of S.
    Returns the implication's truth value; vacuously True for larger sets.
    """
    inter = sorted(set(u_set) & set(s_set))
    diam = 0.0
    for i, u in enumerate(inter):
        for v in inter[i:]:
            diam = max(diam, d[pair_key(u, v)])
    if diam <= 1.0 / 6.0 + _SLACK:
        return 3 * len(inter) <= 2 * len(s_set)
    return True
