"""Recursive width interdiction and its round-or-separate master loop.

Given a target width w and a candidate edge-length vector x, the recursion
repeatedly asks the separator LP for a cheap fractional separator of the
current terminal set, carves the graph into regions around it, deletes the
region-boundary edges, and recurses into the resulting pieces. When the
separator LP is infeasible instead, the dual certificate is surfaced as a
cut on x; the master loop accumulates those cuts in a pool and re-optimizes
x until a full recursion succeeds.
"""

import dataclasses
import math
from collections import defaultdict

from .decomposition import RecursionTrace, assemble, validate
from .graph import Graph, Subgraph
from .lp import TOL_CUT, LinearProgram, LpError, cutting_plane
from .regions import partition
from .seplp import DualCertificate, solve_sep_lp


def default_bag_cap(w):
    """Bag-size limit that the recursion keeps itself under.

    Chosen as a fixed point of the terminal-growth recurrence
    L = 2L/3 + 48*ln(w^2+1)*(w + L/w); when the linear term makes that
    recurrence divergent (small w), fall back to a flat multiple and rely
    on the runtime assertion instead.
    """
    lw = math.log(w * w + 1.0)
    den = 1.0 - 144.0 * lw / w
    if den > 0.0:
        return int(math.ceil(3.0 * 48.0 * lw * w / den))
    return int(math.ceil(6.0 * 48.0 * w * lw))


@dataclasses.dataclass(frozen=True)
class InterdictConfig:
    """Knobs for one interdiction run.

    s0_policy picks the initial terminal set: "degree" takes the min(w+1, n)
    highest-degree vertices, "all" takes every vertex, or pass an explicit
    collection of vertex ids. leaf_size is the component size below which
    the recursion stops and emits a single bag.
    """

    w: int
    bag_cap: int = None
    s0_policy: object = "degree"
    max_cut_rounds: int = 60
    tol_cut: float = TOL_CUT
    seed: int = 0
    leaf_size: int = None

    def __post_init__(self):
        if not isinstance(self.w, int) or self.w < 1:
            raise ValueError("w must be an integer >= 1")
        if self.bag_cap is None:
            object.__setattr__(self, "bag_cap", default_bag_cap(self.w))
        if self.bag_cap < self.w:
            raise ValueError("bag_cap must be at least w")
        if self.leaf_size is None:
            object.__setattr__(self, "leaf_size", max(self.w + 1, 2))
        if self.leaf_size < 1:
            raise ValueError("leaf_size must be at least 1")
        if isinstance(self.s0_policy, str):
            if self.s0_policy not in ("degree", "all"):
                raise ValueError("s0_policy must be 'degree', 'all', or an "
                                 "explicit vertex collection")
        else:
            object.__setattr__(self, "s0_policy",
                               tuple(sorted(set(self.s0_policy))))

    def to_json_dict(self):
        policy = self.s0_policy
        if not isinstance(policy, str):
            policy = list(policy)
        return {
            "w": self.w,
            "bag_cap": self.bag_cap,
            "s0_policy": policy,
            "max_cut_rounds": self.max_cut_rounds,
            "tol_cut": self.tol_cut,
            "seed": self.seed,
            "leaf_size": self.leaf_size,
        }


@dataclasses.dataclass(frozen=True)
class NeedCut:
    """The recursion got stuck at terminal set s_set; cut is the violated
    inequality its separator LP produced for the current x."""

    cut: object
    s_set: frozenset


@dataclasses.dataclass(frozen=True)
class InterdictionResult:
    f_set: frozenset
    decomposition: object
    trace: RecursionTrace
    stats: dict
    cuts: tuple = ()

    def to_json_dict(self):
        return {
            "F": [list(e) for e in sorted(self.f_set)],
            "decomposition": self.decomposition.to_json_dict(),
            "stats": dict(self.stats),
        }


class _Stuck(Exception):
    def __init__(self, cut, s_set):
        super().__init__("separator LP infeasible")
        self.cut = cut
        self.s_set = frozenset(s_set)


def initial_terminals(g, cfg):
    """Resolve the configured S0 policy against a concrete graph."""
    if cfg.s0_policy == "all":
        return frozenset(g.vertices)
    if cfg.s0_policy == "degree":
        count = min(cfg.w + 1, g.n)
        ranked = sorted(g.vertices, key=lambda v: (-len(g.adj[v]), v))
        return frozenset(ranked[:count])
    chosen = frozenset(cfg.s0_policy)
    bad = [v for v in sorted(chosen) if not (0 <= v < g.n)]
    if bad:
        raise ValueError("s0_policy names unknown vertices %r" % (bad,))
    return chosen


def _recurse(g, work, s_set, x, sep_solver, cfg, depth, depth_cap, rec):
    verts = work.vertices
    if len(s_set) > cfg.bag_cap:
        raise RuntimeError(
            "recursion node carries %d terminals, above the bag cap %d"
            % (len(s_set), cfg.bag_cap))
    if not s_set or len(verts) <= cfg.leaf_size:
        return RecursionTrace(work, s_set, "leaf")
    if depth > depth_cap:
        raise RuntimeError(
            "recursion depth %d exceeds 4*log2(n) + 10 = %.1f; the "
            "terminal sets are not shrinking" % (depth, depth_cap))
    x_local = {e: x[e] for e in work.edges}
    sep = sep_solver(work, x_local, s_set, cfg.w)
    if isinstance(sep, DualCertificate):
        raise _Stuck(sep.cut, s_set)
    res = partition(work, s_set, x_local, sep.y, float(cfg.w),
                    lp_cost_global=rec["lp_cost"], n_global=g.n)
    rec["partition_calls"] += 1
    rec["volumes"][depth] += sum(reg.vol_x for reg in res.regions)
    rec["depth"] = max(rec["depth"], depth)
    keep = s_set | res.x_set
    children = []
    for comp in res.components:
        e_i = frozenset(e for e in work.edges
                        if e not in res.d_set
                        and (e[0] in comp or e[1] in comp))
        if not e_i:
            continue
        v_i = frozenset(v for e in e_i for v in e)
        s_i = v_i & keep
        child = Subgraph(g, v_i, e_i)
        if s_i == v_i:
            # The piece consists entirely of boundary vertices; one bag
            # covers it.
            children.append(RecursionTrace(child, s_i, "leaf"))
        elif v_i == verts and e_i == work.edges and s_i == s_set:
            # The recursion would repeat itself verbatim; cap this branch
            # with a single bag instead of looping forever.
            children.append(RecursionTrace(child, s_i, "leaf"))
        else:
            children.append(_recurse(g, child, s_i, x, sep_solver, cfg,
                                     depth + 1, depth_cap, rec))
    return RecursionTrace(work, s_set, "internal",
                          x_set=res.x_set, d_set=res.d_set,
                          children=children)


def _collect_deletions(trace):
    seen = set()

    def walk(node):
        for e in node.d_set:
            if e in seen:
                raise RuntimeError("edge %r deleted twice in the trace"
                                   % (e,))
            seen.add(e)
        for child in node.children:
            walk(child)

    walk(trace)
    return frozenset(seen)


def interdict_with_solution(g, w, x=None, sep_solver=solve_sep_lp,
                            config=None):
    """Run the full recursion for one candidate x.

    Returns an InterdictionResult on success, or a NeedCut carrying the
    violated inequality when some terminal set cannot be separated within
    budget w under the given x.
    """
    cfg = config if config is not None else InterdictConfig(w=w)
    if cfg.w != w:
        raise ValueError("config is for w=%d, call asked for w=%d"
                         % (cfg.w, w))
    if x is None:
        x = {e: 0.0 for e in g.edges}
    missing = [e for e in sorted(g.edges) if e not in x]
    if missing:
        raise ValueError("x lacks values for edges %r" % (missing[:3],))
    lp_cost = float(sum(x[e] for e in g.edges))
    rec = {
        "volumes": defaultdict(float),
        "partition_calls": 0,
        "depth": 0,
        "lp_cost": lp_cost,
    }
    depth_cap = 4.0 * math.log2(max(g.n, 2)) + 10.0
    s0 = initial_terminals(g, cfg)
    try:
        trace = _recurse(g, Subgraph.full(g), s0, x, sep_solver, cfg,
                         0, depth_cap, rec)
    except _Stuck as stuck:
        return NeedCut(stuck.cut, stuck.s_set)
    f_set = _collect_deletions(trace)
    decomp = assemble(trace)
    remaining = Graph(g.n, g.edges - f_set, vertex_labels=g.vertex_labels)
    report = validate(decomp, remaining)
    if not report.ok:
        raise RuntimeError("assembled decomposition invalid: "
                           + report.violation)
    if decomp.width() > cfg.bag_cap - 1:
        raise RuntimeError("decomposition width %d exceeds bag cap %d - 1"
                           % (decomp.width(), cfg.bag_cap))
    levels = [rec["volumes"][d] for d in range(rec["depth"] + 1)]
    if lp_cost > 0.0:
        ratio = len(f_set) / lp_cost
    else:
        ratio = 0.0 if not f_set else math.inf
    stats = {
        "lp_cost": lp_cost,
        "deleted": len(f_set),
        "ratio": ratio,
        "width": decomp.width(),
        "depth": rec["depth"],
        "partition_calls": rec["partition_calls"],
        "level_volumes": levels,
    }
    return InterdictionResult(f_set, decomp, trace, stats)


def round_or_separate(g, w, config=None):
    """Alternate interdiction attempts with master-LP cut generation.

    The master LP minimizes the total edge length subject to the pooled
    cuts; its final objective is reported as lp_lower_bound. Raises LpError
    when max_cut_rounds is exhausted.
    """
    cfg = config if config is not None else InterdictConfig(w=w)
    if cfg.w != w:
        raise ValueError("config is for w=%d, call asked for w=%d"
                         % (cfg.w, w))
    if not g.edges:
        out = interdict_with_solution(g, w, {}, config=cfg)
        out.stats.update(lp_lower_bound=0.0, cuts=0, rounds=1)
        return out
    master = LinearProgram("min")
    for e in sorted(g.edges):
        master.add_variable(e, 0.0, 1.0)
    master.set_objective({e: 1.0 for e in sorted(g.edges)})
    holder = {}

    def attempt(sol):
        x_hat = {e: float(sol.primal[e]) for e in g.edges}
        out = interdict_with_solution(g, w, x_hat, config=cfg)
        if isinstance(out, NeedCut):
            return out.cut
        holder["result"] = out
        return None

    sol, pool, rounds = cutting_plane(master, attempt,
                                      max_rounds=cfg.max_cut_rounds,
                                      tol_cut=cfg.tol_cut)
    res = holder["result"]
    res.stats.update(lp_lower_bound=float(sol.objective),
                     cuts=len(pool), rounds=rounds)
    return dataclasses.replace(res, cuts=tuple(pool.cuts))
