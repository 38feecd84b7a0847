"""End-to-end solvers for noisy near-planar inputs.

noisy_mis deletes a small vertex set via the configuration-LP rounding
pipeline, then solves each leftover component exactly. noisy_maxsat
interdicts the factor graph down to bounded width, drops the clauses
that lost an edge, and runs an exact dynamic program on the rest. Both
re-verify their own output before returning it.
"""

import dataclasses
import math

from .bsi import DEFAULT_PIECE_BUDGET, bsi_solve, properize
from .cnf import CnfFormula, count_satisfied
from .decomposition import (NiceTreeDecomposition, TreeDecomposition,
                            greedy_decomposition, make_nice, validate)
from .graph import Graph, build_factor_graph, connected_components
from .interdict import InterdictConfig, round_or_separate
from .oracles import exact_mis

DEFAULT_DP_WIDTH_CAP = 18


@dataclasses.dataclass(frozen=True)
class MisParams:
    """Knobs for the independent-set pipeline.

    s caps the component size left for exact solving, beta is the
    deletion threshold for the LP rounding, and a_policy / repeats /
    seed pass straight through to bsi_solve.
    """

    s: int
    beta: float
    a_policy: object = "auto"
    repeats: int = 10
    seed: int = 0
    piece_budget: int = DEFAULT_PIECE_BUDGET

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be a positive integer")
        if not (0.0 < self.beta <= 1.0):
            raise ValueError("beta must lie in (0, 1]")
        if self.repeats < 1:
            raise ValueError("repeats must be a positive integer")

    @classmethod
    def from_epsilon(cls, epsilon, **overrides):
        """Accuracy-driven preset: gamma = epsilon^2, s = ceil(1/gamma^2),
        beta = sqrt(gamma). Keyword overrides replace individual fields."""
        if not (0.0 < epsilon < 1.0):
            raise ValueError("epsilon must lie in (0, 1)")
        gamma = epsilon * epsilon
        fields = {
            "s": int(math.ceil(1.0 / (gamma * gamma))),
            "beta": math.sqrt(gamma),
        }
        fields.update(overrides)
        return cls(**fields)

    def to_json_dict(self):
        policy = self.a_policy
        if not isinstance(policy, (str, int)):
            policy = sorted(int(a) for a in policy)
        return {
            "s": self.s,
            "beta": self.beta,
            "a_policy": policy,
            "repeats": self.repeats,
            "seed": self.seed,
            "piece_budget": self.piece_budget,
        }


@dataclasses.dataclass(frozen=True)
class MisReport:
    """Outcome of noisy_mis: the independent set, the deleted vertices,
    and the sizes of the exactly-solved components."""

    solution: frozenset
    objective: int
    x_second: frozenset
    component_sizes: tuple
    params: MisParams
    stats: dict = dataclasses.field(compare=False, default_factory=dict)

    def to_json_dict(self):
        return {
            "solution": sorted(self.solution),
            "objective": self.objective,
            "x_second": sorted(self.x_second),
            "component_sizes": list(self.component_sizes),
            "params": self.params.to_json_dict(),
            "stats": dict(self.stats),
        }


def _induced_subgraph(g, comp):
    """Relabel the induced subgraph on comp to 0..len(comp)-1.

    Returns (subgraph, sorted vertex list); subgraph vertex i is the
    i-th smallest member of comp.
    """
    live = sorted(comp)
    idx = {v: i for i, v in enumerate(live)}
    edges = [(idx[u], idx[v]) for (u, v) in g.edges
             if u in comp and v in comp]
    return Graph(len(live), edges), live


def noisy_mis(g, params):
    """Approximate maximum independent set via delete-then-solve.

    Runs the configuration-LP pipeline to pick a deletion set X'' whose
    removal shatters g into components of size at most params.s, solves
    each component exactly, and returns the union. The solution is at
    least alpha(g) - |X''| because deleting X'' costs any independent
    set at most |X''| vertices. Raises RuntimeError if a component
    exceeds params.s or the union fails the independence recheck.
    """
    if not isinstance(params, MisParams):
        raise ValueError("params must be a MisParams instance")
    rounded = bsi_solve(g, params.s, params.beta, a_policy=params.a_policy,
                        repeats=params.repeats, seed=params.seed,
                        budget=params.piece_budget)
    x_second = properize(g, rounded)
    kept = [e for e in g.edges if not (set(e) & x_second)]
    residual = Graph(g.n, kept)
    chosen = set()
    comp_sizes = []
    for comp in connected_components(residual):
        if comp & x_second:
            continue
        if len(comp) > params.s:
            raise RuntimeError(
                "component of size %d survived the deletion stage but the "
                "piece size cap is %d" % (len(comp), params.s))
        sub, live = _induced_subgraph(g, comp)
        local = exact_mis(sub)
        chosen.update(live[i] for i in local)
        comp_sizes.append(len(live))
    for (u, v) in sorted(g.edges):
        if u in chosen and v in chosen:
            raise RuntimeError("solution contains adjacent pair (%d, %d)"
                               % (u, v))
    if chosen & x_second:
        raise RuntimeError("solution overlaps the deleted set")
    stats = dict(rounded.stats)
    stats["components"] = len(comp_sizes)
    stats["deleted"] = len(x_second)
    return MisReport(solution=frozenset(chosen), objective=len(chosen),
                     x_second=x_second,
                     component_sizes=tuple(sorted(comp_sizes)),
                     params=params, stats=stats)


def _clause_vertex_literals(phi):
    """Map factor-graph clause-vertex id -> the clause's literal set."""
    return {phi.n + ci: clause for ci, clause in enumerate(phi.clauses)}


def _assign_insert(assign, v, value):
    out = [pair for pair in assign if pair[0] != v]
    out.append((v, value))
    out.sort()
    return tuple(out)


def _merge_state(table, key, score, witness):
    cur = table.get(key)
    if cur is None or score > cur[0]:
        table[key] = (score, witness)


def maxsat_dp(phi, t, width_cap=DEFAULT_DP_WIDTH_CAP):
    """Exact MaxSAT by dynamic programming over a factor-graph
    decomposition.

    t must be a decomposition of build_factor_graph(phi); plain
    decompositions are converted with make_nice. Each DP state is the
    assignment of the bag's variable vertices plus a satisfied flag per
    bag clause vertex; a clause contributes to the score exactly once,
    at the node that forgets it. Returns (count, assignment) where
    assignment is a tuple of phi.n booleans, re-scored independently
    before returning.
    """
    h = build_factor_graph(phi)
    if not isinstance(t, NiceTreeDecomposition):
        t = make_nice(t)
    report = validate(t, h)
    if not report.ok:
        raise ValueError("decomposition does not match the factor graph: "
                         + report.violation)
    if t.width() > width_cap:
        raise ValueError("decomposition width %d exceeds the DP cap %d"
                         % (t.width(), width_cap))
    n = phi.n
    lits = _clause_vertex_literals(phi)
    kids = t.children()

    order = []
    stack = [(t.root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        stack.append((node, True))
        for child in sorted(kids[node], reverse=True):
            stack.append((child, False))

    tables = {}
    for node in order:
        kind = t.kinds[node]
        bag = t.bags[node]
        if kind[0] == "leaf":
            table = {((), ()): (0, {})}
        elif kind[0] == "introduce":
            v = kind[1]
            child = tables.pop(kids[node][0])
            table = {}
            if v < n:
                bag_clauses = sorted(c for c in bag if c >= n)
                for (assign, flags), (score, wit) in sorted(child.items()):
                    for value in (False, True):
                        lit = v + 1 if value else -(v + 1)
                        new_assign = _assign_insert(assign, v, value)
                        new_flags = set(flags)
                        for c in bag_clauses:
                            if lit in lits[c]:
                                new_flags.add(c)
                        new_wit = dict(wit)
                        new_wit[v] = value
                        _merge_state(table,
                                     (new_assign, tuple(sorted(new_flags))),
                                     score, new_wit)
            else:
                clause = lits[v]
                for (assign, flags), (score, wit) in sorted(child.items()):
                    sat = any((u + 1 if value else -(u + 1)) in clause
                              for (u, value) in assign)
                    new_flags = tuple(sorted(set(flags) | {v})) if sat \
                        else flags
                    _merge_state(table, (assign, new_flags), score, wit)
        elif kind[0] == "forget":
            v = kind[1]
            child = tables.pop(kids[node][0])
            table = {}
            if v < n:
                for (assign, flags), (score, wit) in sorted(child.items()):
                    new_assign = tuple(p for p in assign if p[0] != v)
                    _merge_state(table, (new_assign, flags), score, wit)
            else:
                for (assign, flags), (score, wit) in sorted(child.items()):
                    gained = 1 if v in flags else 0
                    new_flags = tuple(c for c in flags if c != v)
                    _merge_state(table, (assign, new_flags),
                                 score + gained, wit)
        elif kind[0] == "join":
            left, right = (tables.pop(c) for c in kids[node])
            by_assign = {}
            for (assign, flags), payload in sorted(right.items()):
                by_assign.setdefault(assign, []).append((flags, payload))
            table = {}
            for (assign, flags), (score, wit) in sorted(left.items()):
                for rflags, (rscore, rwit) in by_assign.get(assign, ()):
                    for u in wit.keys() & rwit.keys():
                        if wit[u] != rwit[u]:
                            raise RuntimeError(
                                "join children disagree on variable %d" % u)
                    merged = dict(wit)
                    merged.update(rwit)
                    key = (assign, tuple(sorted(set(flags) | set(rflags))))
                    _merge_state(table, key, score + rscore, merged)
        else:
            raise RuntimeError("unknown node kind %r" % (kind,))
        tables[node] = table

    final = tables[t.root]
    if ((), ()) not in final:
        raise RuntimeError("root table is missing the empty state")
    score, wit = final[((), ())]
    assignment = tuple(bool(wit.get(v, False)) for v in range(n))
    recount = count_satisfied(phi, assignment)
    if recount != score:
        raise RuntimeError("dynamic program scored %d but the assignment "
                           "satisfies %d clauses" % (score, recount))
    return score, assignment


@dataclasses.dataclass(frozen=True)
class MaxSatParams:
    """Knobs for the MaxSAT pipeline: interdiction settings plus the
    width cap for the dynamic program. bag_cap and leaf_size default to
    the interdiction module's own choices when left as None."""

    bag_cap: int = None
    s0_policy: object = "degree"
    max_cut_rounds: int = 60
    seed: int = 0
    leaf_size: int = None
    width_cap: int = DEFAULT_DP_WIDTH_CAP

    def interdict_config(self, w):
        fields = {"w": w, "s0_policy": self.s0_policy,
                  "max_cut_rounds": self.max_cut_rounds, "seed": self.seed}
        if self.bag_cap is not None:
            fields["bag_cap"] = self.bag_cap
        if self.leaf_size is not None:
            fields["leaf_size"] = self.leaf_size
        return InterdictConfig(**fields)

    def to_json_dict(self):
        return {
            "bag_cap": self.bag_cap,
            "s0_policy": self.s0_policy if isinstance(self.s0_policy, str)
            else sorted(self.s0_policy),
            "max_cut_rounds": self.max_cut_rounds,
            "seed": self.seed,
            "leaf_size": self.leaf_size,
            "width_cap": self.width_cap,
        }


@dataclasses.dataclass(frozen=True)
class MaxSatReport:
    """Outcome of noisy_maxsat. objective counts satisfied clauses of
    the surviving formula; deleted_clauses lists original clause
    indices removed because interdiction cut one of their edges."""

    assignment: tuple
    objective: int
    deleted_clauses: tuple
    f_set: frozenset
    params: MaxSatParams
    stats: dict = dataclasses.field(compare=False, default_factory=dict)

    def to_json_dict(self):
        return {
            "assignment": [bool(b) for b in self.assignment],
            "objective": self.objective,
            "deleted_clauses": list(self.deleted_clauses),
            "f_set": sorted([list(e) for e in self.f_set]),
            "params": self.params.to_json_dict(),
            "stats": dict(self.stats),
        }


def _restrict_decomposition(t, phi, deleted):
    """Drop deleted clause vertices from every bag and relabel the
    survivors to the compacted clause indexing."""
    new_id = {}
    nxt = 0
    for ci in range(phi.m):
        if ci not in deleted:
            new_id[ci] = nxt
            nxt += 1
    bags = {}
    for node in t.nodes:
        mapped = set()
        for v in t.bags[node]:
            if v < phi.n:
                mapped.add(v)
            elif (v - phi.n) in new_id:
                mapped.add(phi.n + new_id[v - phi.n])
        bags[node] = frozenset(mapped)
    return TreeDecomposition(t.parents, bags)


def solve_after_deletion(phi, f_set, t, width_cap=DEFAULT_DP_WIDTH_CAP):
    """Drop the clauses hit by f_set, then solve the rest exactly.

    f_set is a set of factor-graph edges of phi; t is a decomposition
    of the factor graph minus f_set. Every clause with a deleted edge
    is removed, t is restricted to the surviving formula's factor graph
    and revalidated, and maxsat_dp runs on whichever of the restricted
    decomposition and a fresh min-fill one is narrower (the clause
    deletions, and with them the approximation guarantee, do not depend
    on that choice). Returns (count, assignment, deleted, stats).
    """
    deleted = set()
    for (u, v) in f_set:
        clause_end = u if u >= phi.n else v
        var_end = v if u >= phi.n else u
        if clause_end < phi.n or var_end >= phi.n:
            raise RuntimeError("deleted edge %r is not variable-to-clause"
                               % ((u, v),))
        deleted.add(clause_end - phi.n)
    keep = [ci for ci in range(phi.m) if ci not in deleted]
    phi_kept = CnfFormula(phi.n, [sorted(phi.clauses[ci]) for ci in keep])
    t_kept = _restrict_decomposition(t, phi, deleted)
    h_kept = build_factor_graph(phi_kept)
    report = validate(t_kept, h_kept)
    if not report.ok:
        raise RuntimeError("restricted decomposition invalid: "
                           + report.violation)
    t_dp = t_kept
    t_refit = greedy_decomposition(h_kept)
    if t_refit.width() < t_dp.width():
        t_dp = t_refit
    count, assignment = maxsat_dp(phi_kept, make_nice(t_dp),
                                  width_cap=width_cap)
    stats = {
        "deleted": len(deleted),
        "kept": len(keep),
        "width": t_dp.width(),
        "interdiction_width": t_kept.width(),
        "satisfied_in_original": count_satisfied(phi, assignment),
    }
    return count, assignment, tuple(sorted(deleted)), stats


def noisy_maxsat(phi, w, params=None):
    """Approximate MaxSAT by interdicting the factor graph.

    Deletes an edge set F' that brings the factor graph to treewidth
    at most the interdiction bag cap, removes every clause that lost
    an edge, and solves the remaining formula exactly. Any single
    assignment loses at most one satisfied clause per deleted clause,
    so the returned objective is at least the true optimum minus
    len(deleted_clauses).
    """
    if params is None:
        params = MaxSatParams()
    if not isinstance(params, MaxSatParams):
        raise ValueError("params must be a MaxSatParams instance")
    h = build_factor_graph(phi)
    cfg = params.interdict_config(w)
    res = round_or_separate(h, w, config=cfg)
    count, assignment, deleted, stats = solve_after_deletion(
        phi, res.f_set, res.decomposition, width_cap=params.width_cap)
    stats["lp_lower_bound"] = res.stats.get("lp_lower_bound", 0.0)
    stats["cut_rounds"] = res.stats.get("rounds", 0)
    return MaxSatReport(assignment=assignment, objective=count,
                        deleted_clauses=deleted,
                        f_set=res.f_set, params=params, stats=stats)
