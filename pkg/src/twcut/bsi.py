"""Bounded-size interdiction via a configuration LP and randomized rounding.

The goal is to split the vertex set into a deleted part X and pieces of at
most s vertices each while cutting as few edges between distinct pieces as
possible. A configuration LP fractionally assigns each vertex either to X
or to candidate pieces (connected subsets of size at most s); rounding
first promotes heavy-y vertices into X, then samples whole pieces and keeps
their uncovered parts. A final conversion pass moves one endpoint of every
surviving cross edge into X so the output is a genuine vertex separator:
every component of the remaining graph fits in one piece.
"""

import dataclasses
import math
import random

from . import lp as lplib
from .graph import Graph, connected_components

DEFAULT_PIECE_BUDGET = 200000
TOL_SOL = 1e-6
_SUPPORT_EPS = 1e-9


def enumerate_pieces(g, s, budget=DEFAULT_PIECE_BUDGET):
    """All connected vertex subsets of size <= s, each exactly once.

    Subsets are generated grouped by their smallest vertex; within a group
    the usual include/exclude split over boundary candidates guarantees
    uniqueness. Singletons are always present, so isolated vertices get a
    piece too. Raises ValueError when the family grows past budget.
    """
    if s < 1:
        raise ValueError("piece size s must be at least 1")
    pieces = []

    def grow(current, banned):
        pieces.append(frozenset(current))
        if len(pieces) > budget:
            raise ValueError(
                "piece family exceeds the enumeration budget of %d subsets; "
                "lower s or raise the budget" % budget)
        if len(current) == s:
            return
        v0 = min(current)
        cand = sorted({u for w in current for u in g.adj[w]
                       if u > v0 and u not in current and u not in banned})
        barred = set(banned)
        for u in cand:
            grow(current | {u}, barred)
            barred.add(u)

    for v in sorted(g.vertices):
        grow({v}, set())
    return pieces


def build_config_lp(g, s, a, pieces=None, budget=DEFAULT_PIECE_BUDGET):
    """LP over per-edge cut variables x, per-vertex deletion variables y,
    and per-piece selection variables z.

    Minimizes the cut mass subject to: total y at most a; every vertex
    fully covered by y plus its pieces; and, for each edge in both
    orientations, pieces holding u but not v must be paid for by the edge
    or by deleting v.
    """
    if a < 0:
        raise ValueError("deletion budget a must be nonnegative")
    if pieces is None:
        pieces = enumerate_pieces(g, s, budget)
    lp = lplib.LinearProgram("min")
    for e in sorted(g.edges):
        lp.add_variable(("x",) + e, 0.0, 1.0)
    for v in sorted(g.vertices):
        lp.add_variable(("y", v), 0.0, 1.0)
    names = []
    for members in pieces:
        name = ("z", tuple(sorted(members)))
        names.append(name)
        lp.add_variable(name, 0.0, 1.0)
    lp.set_objective({("x",) + e: 1.0 for e in sorted(g.edges)})

    lp.add_constraint({("y", v): 1.0 for v in g.vertices},
                      lplib.LESS, float(a), name="budget")
    holding = {v: [] for v in g.vertices}
    for members, name in zip(pieces, names):
        for v in members:
            holding[v].append(name)
    for v in sorted(g.vertices):
        coeffs = {name: 1.0 for name in holding[v]}
        coeffs[("y", v)] = 1.0
        lp.add_constraint(coeffs, lplib.EQUAL, 1.0, name="cover_%d" % v)
    for u, v in sorted(g.edges):
        for src, dst in ((u, v), (v, u)):
            coeffs = {}
            for members, name in zip(pieces, names):
                if src in members and dst not in members:
                    coeffs[name] = 1.0
            coeffs[("x", u, v)] = -1.0
            coeffs[("y", dst)] = coeffs.get(("y", dst), 0.0) - 1.0
            lp.add_constraint(coeffs, lplib.LESS, 0.0,
                              name="cut_%d_%d" % (src, dst))
    return lp


@dataclasses.dataclass(frozen=True)
class ConfigLpSolution:
    """Optimal fractional plan: x per edge, y per vertex, z per piece
    (support only), with the budget a and piece size s it was built for."""

    graph: object
    s: int
    a: float
    x: dict
    y: dict
    z: dict
    objective: float

    def validate(self, tol=TOL_SOL):
        g = self.graph
        total_y = sum(self.y.values())
        if total_y > self.a + tol:
            raise RuntimeError("y mass %.6f exceeds the budget a=%.6f"
                               % (total_y, self.a))
        cover = {v: 0.0 for v in g.vertices}
        for members, val in self.z.items():
            if len(members) > self.s:
                raise RuntimeError("piece %r larger than s=%d"
                                   % (sorted(members), self.s))
            for v in members:
                cover[v] += val
        for v in g.vertices:
            if abs(cover[v] - (1.0 - self.y[v])) > tol:
                raise RuntimeError(
                    "vertex %d covered %.6f but 1 - y = %.6f"
                    % (v, cover[v], 1.0 - self.y[v]))
        for u, v in g.edges:
            for src, dst in ((u, v), (v, u)):
                mass = sum(val for members, val in self.z.items()
                           if src in members and dst not in members)
                if mass > self.x[(u, v)] + self.y[dst] + tol:
                    raise RuntimeError(
                        "edge (%d,%d): one-sided piece mass %.6f exceeds "
                        "x + y_%d = %.6f" % (u, v, mass, dst,
                                             self.x[(u, v)] + self.y[dst]))

    def support_size(self):
        nz = sum(1 for val in self.x.values() if val > _SUPPORT_EPS)
        nz += sum(1 for val in self.y.values() if val > _SUPPORT_EPS)
        nz += sum(1 for val in self.z.values() if val > _SUPPORT_EPS)
        return nz

    def to_json_dict(self):
        return {
            "s": self.s,
            "a": self.a,
            "objective": self.objective,
            "x": {"%d,%d" % e: val for e, val in sorted(self.x.items())},
            "y": {str(v): val for v, val in sorted(self.y.items())},
            "z": {",".join(map(str, sorted(members))): val
                  for members, val in sorted(self.z.items(),
                                             key=lambda kv: sorted(kv[0]))},
        }


def solve_config_lp(g, s, a, pieces=None, budget=DEFAULT_PIECE_BUDGET):
    """Build and solve the configuration LP to a vertex optimum.

    The simplex method keeps the support small: a basic solution has at
    most one nonzero per row plus the variables parked at their upper
    bound, which is what makes sampling over the z support affordable.
    """
    if pieces is None:
        pieces = enumerate_pieces(g, s, budget)
    lp = build_config_lp(g, s, a, pieces=pieces)
    sol = lplib.solve(lp, method="highs-ds")
    if sol.status != "optimal":
        raise lplib.LpError("configuration LP came back %s" % sol.status)
    x = {e: float(sol.primal[("x",) + e]) for e in g.edges}
    y = {v: float(sol.primal[("y", v)]) for v in g.vertices}
    z = {}
    for members in pieces:
        val = float(sol.primal[("z", tuple(sorted(members)))])
        if val > _SUPPORT_EPS:
            z[members] = val
    out = ConfigLpSolution(g, s, float(a), x, y, z, float(sol.objective))
    out.validate()
    rows = 1 + g.n + 2 * len(g.edges)
    cap = rows + g.n + len(g.edges) + int(math.ceil(a)) + 1
    if out.support_size() > cap:
        raise RuntimeError(
            "solution support %d exceeds the basic-solution cap %d"
            % (out.support_size(), cap))
    return out


@dataclasses.dataclass(frozen=True)
class BsiResult:
    """Vertex deletions x_prime, disjoint pieces covering the rest, and the
    cross edges f_set that survive between distinct pieces."""

    x_prime: frozenset
    pieces: tuple
    f_set: frozenset
    phase_count: int
    seed: int
    stats: dict = dataclasses.field(default_factory=dict, compare=False)

    def to_json_dict(self):
        return {
            "x_prime": sorted(self.x_prime),
            "pieces": [sorted(p) for p in self.pieces],
            "cross_edges": [list(e) for e in sorted(self.f_set)],
            "phase_count": self.phase_count,
            "seed": self.seed,
            "stats": dict(self.stats),
        }


def _cross_edges(g, x_prime, pieces):
    owner = {}
    for idx, members in enumerate(pieces):
        for v in members:
            owner[v] = idx
    out = set()
    for u, v in g.edges:
        if u in x_prime or v in x_prime:
            continue
        if owner[u] != owner[v]:
            out.add((u, v))
    return frozenset(out)


def _check_partition(g, x_prime, pieces, s):
    seen = set()
    for members in pieces:
        if len(members) > s:
            raise RuntimeError("piece of size %d exceeds s=%d"
                               % (len(members), s))
        if seen & members:
            raise RuntimeError("pieces overlap on %r"
                               % sorted(seen & members))
        seen |= members
    if seen | set(x_prime) != set(g.vertices) or (seen & set(x_prime)):
        raise RuntimeError("pieces plus deletions do not partition V")


def phase_cap(n):
    return max(1, int(math.ceil(100.0 * math.log2(max(n, 2)))))


def round_bsi(sol, beta, seed=0, record_phases=False):
    """Round a configuration LP solution into an actual partition.

    Vertices with y at least beta (boundary inclusive) are deleted up
    front; |x_prime| <= a/beta is asserted since the y budget pays beta for
    each. Then whole support pieces are sampled, each phase keeping the
    still-uncovered part of every sampled piece, until everything is
    covered. A phase cap keeps termination deterministic; anything still
    uncovered at the cap is deleted instead.

    For beta above 1/2 the sampling guarantee is void, so the fallback
    deletes nothing and chops the vertices into size-s runs.

    record_phases adds stats["phase_history"], the sorted uncovered set
    after each sampling phase, for bookkeeping of coverage progress.
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must lie in (0, 1]")
    g = sol.graph
    if beta > 0.5:
        ordered = sorted(g.vertices)
        pieces = tuple(frozenset(ordered[i:i + sol.s])
                       for i in range(0, len(ordered), sol.s))
        x_prime = frozenset()
        _check_partition(g, x_prime, pieces, sol.s)
        f_set = _cross_edges(g, x_prime, pieces)
        stats = {"fallback": "chop", "beta": beta}
        if record_phases:
            stats["phase_history"] = []
        return BsiResult(x_prime, pieces, f_set, 0, seed, stats=stats)

    x_prime = {v for v in g.vertices if sol.y[v] >= beta}
    if len(x_prime) > sol.a / beta + TOL_SOL:
        raise RuntimeError(
            "preprocessing deleted %d vertices, above a/beta = %.3f"
            % (len(x_prime), sol.a / beta))
    deleted_pre = len(x_prime)
    uncovered = set(g.vertices) - x_prime
    support = sorted(sol.z.items(), key=lambda kv: tuple(sorted(kv[0])))
    rng = random.Random(seed)
    cap = phase_cap(g.n)
    pieces = []
    phases = 0
    history = []
    while uncovered and phases < cap:
        phases += 1
        for members, val in support:
            if rng.random() < val:
                fresh = members & uncovered
                if fresh:
                    pieces.append(frozenset(fresh))
                uncovered -= members
        if record_phases:
            history.append(tuple(sorted(uncovered)))
        if not uncovered:
            break
    leftovers = len(uncovered)
    if uncovered:
        x_prime |= uncovered
    x_prime = frozenset(x_prime)
    pieces = tuple(pieces)
    _check_partition(g, x_prime, pieces, sol.s)
    f_set = _cross_edges(g, x_prime, pieces)
    stats = {"beta": beta, "deleted_pre": deleted_pre,
             "deleted_at_cap": leftovers}
    if record_phases:
        stats["phase_history"] = history
    return BsiResult(x_prime, pieces, f_set, phases, seed, stats=stats)


def _greedy_cover(edges):
    alive = set(edges)
    cover = set()
    while alive:
        load = {}
        for u, v in alive:
            load[u] = load.get(u, 0) + 1
            load[v] = load.get(v, 0) + 1
        pick = min(load, key=lambda v: (-load[v], v))
        cover.add(pick)
        alive = {e for e in alive if pick not in e}
    return cover


def _incident_count(g, removed):
    return sum(1 for e in g.edges if e[0] in removed or e[1] in removed)


def _best_cover(g, edges, base, limit):
    """Endpoint cover of `edges` by branch and bound; deterministic.

    Primary objective is cover size; among minimum covers the one whose
    union with `base` touches the most graph edges wins (it leaves the
    loosest residual graph), with a lexicographic key to settle the rest.
    Falls back to the greedy cover when there are too many edges to
    search.
    """
    greedy = _greedy_cover(edges)
    if len(edges) > limit:
        return greedy
    best = [(len(greedy), -_incident_count(g, set(base) | greedy),
             tuple(sorted(greedy)), greedy)]

    def search(alive, chosen):
        if not alive:
            key = (len(chosen), -_incident_count(g, set(base) | chosen),
                   tuple(sorted(chosen)))
            if key < best[0][:3]:
                best[0] = key + (set(chosen),)
            return
        if len(chosen) + 1 > best[0][0]:
            return
        u, v = min(alive)
        for pick in (u, v):
            nxt = {e for e in alive if pick not in e}
            chosen.add(pick)
            search(nxt, chosen)
            chosen.remove(pick)

    search(frozenset(edges), set())
    return best[0][3]


EXACT_COVER_LIMIT = 30


def properize(g, result):
    """Fold the cross edges into vertex deletions.

    Deletes an endpoint cover of the surviving cross edges: a smallest
    cover when there are few of them (preferring, among those, the cover
    that breaks the most residual edges), otherwise greedy by coverage.
    At most one vertex is added per cross edge, and afterwards no edge
    joins two distinct pieces, so every component of the remaining graph
    sits inside a single piece.
    """
    extra = _best_cover(g, result.f_set, result.x_prime, EXACT_COVER_LIMIT)
    x_second = frozenset(result.x_prime | extra)
    if len(x_second) > len(result.x_prime) + len(result.f_set):
        raise RuntimeError("conversion added more vertices than cross edges")
    for comp in connected_components(_drop(g, x_second)):
        if comp & x_second:
            continue
        if not any(comp <= members for members in result.pieces):
            raise RuntimeError(
                "component %r is not inside a single piece after the "
                "conversion" % sorted(comp))
    return x_second


def _drop(g, removed):
    kept = [e for e in g.edges if e[0] not in removed and e[1] not in removed]
    return Graph(g.n, kept)


def default_a_grid(n):
    """0, 1, 2, 4, ... doubling up to n, plus n itself."""
    grid = [0]
    a = 1
    while a < n:
        grid.append(a)
        a *= 2
    if n >= 1:
        grid.append(n)
    return sorted(set(grid))


def bsi_solve(g, s, beta, a_policy="auto", repeats=10, seed=0,
              budget=DEFAULT_PIECE_BUDGET):
    """Best partition over a grid of deletion budgets and rounding seeds.

    For each budget a, the configuration LP is solved once and rounded
    `repeats` times. A rounding is eligible only when its cross-edge count
    stays within the guarantee 6*objective + 6*beta*|E|; among eligible
    candidates the one whose converted deletion set is smallest wins (ties
    to fewer cross edges, then smaller a). The grid trades at most a factor
    2 in a against trying every value.
    """
    if g.n == 0:
        return BsiResult(frozenset(), (), frozenset(), 0, seed,
                         stats={"a": 0, "objective": 0.0, "eligible": 0})
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must lie in (0, 1]")
    if isinstance(a_policy, str):
        if a_policy != "auto":
            raise ValueError("a_policy must be 'auto', an int, or a "
                             "collection of ints")
        grid = default_a_grid(g.n)
    elif isinstance(a_policy, int):
        grid = [a_policy]
    else:
        grid = sorted(set(int(a) for a in a_policy))
    for a in grid:
        if not 0 <= a <= g.n:
            raise ValueError("budget a=%d outside 0..%d" % (a, g.n))
    pieces = enumerate_pieces(g, s, budget)
    best = None
    best_key = None
    skipped = []
    for a in grid:
        sol = solve_config_lp(g, s, a, pieces=pieces)
        bound = 6.0 * sol.objective + 6.0 * beta * len(g.edges)
        any_eligible = False
        for j in range(repeats):
            rseed = seed * 1000003 + a * 1009 + j
            res = round_bsi(sol, beta, rseed)
            if len(res.f_set) > bound + TOL_SOL:
                continue
            any_eligible = True
            x_second = properize(g, res)
            key = (len(x_second), -_incident_count(g, x_second),
                   len(res.f_set), a, j)
            if best_key is None or key < best_key:
                best_key = key
                best = dataclasses.replace(res, stats=dict(
                    res.stats, a=a, objective=sol.objective,
                    cross_bound=bound, x_second_size=len(x_second)))
        if not any_eligible:
            skipped.append(a)
    if best is None:
        raise RuntimeError(
            "no rounding met the cross-edge guarantee for any budget in %r"
            % (grid,))
    best.stats["a_grid"] = grid
    best.stats["budgets_without_eligible_rounding"] = skipped
    return best
