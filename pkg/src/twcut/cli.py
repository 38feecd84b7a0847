"""Command-line frontend.

Subcommands generate instances (DIMACS plus a ground-truth sidecar), run
the interdiction / partition / independent-set / MaxSAT solvers, call the
exact oracles, and re-verify any report the solvers emitted. Reports are
JSON with a schema_version; everything except the timestamp field is a
deterministic function of the config, so reruns produce byte-identical
bodies. Exit codes: 0 success, 1 solver failure, 2 bad input.
"""

import argparse
import datetime
import json
import logging
import os
import sys

from . import dimacs
from .bsi import bsi_solve, properize
from .cnf import CnfFormula, count_satisfied
from .decomposition import TreeDecomposition, validate
from .generators import (NoiseSpec, add_noise_clauses, add_noise_edges,
                         gen_grid, gen_planar_cnf)
from .graph import Graph, connected_components
from .interdict import InterdictConfig, round_or_separate
from .oracles import (BudgetExceeded, exact_interdiction, exact_maxsat,
                      exact_mis, exact_treewidth, link_number)
from .pipelines import MaxSatParams, MisParams, noisy_maxsat, noisy_mis

SCHEMA_VERSION = 1

log = logging.getLogger("twcut")


def _report(kind, config, result):
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "config": config,
        "result": result,
        "timestamp": datetime.datetime.now(
            datetime.timezone.utc).isoformat(),
    }


def _emit(report, out):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        log.info("wrote %s report to %s", report["kind"], out)
    else:
        sys.stdout.write(text)


def _load_graph(path):
    with open(path) as fh:
        return dimacs.read_dimacs_graph(fh.read())


def _load_cnf(path):
    with open(path) as fh:
        return dimacs.read_dimacs_cnf(fh.read())


def _parse_a(text):
    if text == "auto":
        return "auto"
    if "," in text:
        return tuple(int(part) for part in text.split(",") if part)
    return int(text)


def _cmd_gen(args):
    if args.out is None:
        raise ValueError("gen requires --out to place the DIMACS file")
    if args.what == "grid":
        base = gen_grid(args.side)
        g, added = add_noise_edges(base,
                                   NoiseSpec(delta=args.delta,
                                             seed=args.seed))
        payload = dimacs.write_dimacs_graph(g)
        config = {"command": "gen", "what": "grid", "side": args.side,
                  "delta": args.delta, "seed": args.seed, "out": args.out}
        result = {"n": g.n, "edges": len(g.edges),
                  "noise_edges": sorted(list(e) for e in added)}
    else:
        base = gen_planar_cnf(args.vars, args.clauses, args.arity,
                              seed=args.seed)
        phi, added = add_noise_clauses(base,
                                       NoiseSpec(delta=args.delta,
                                                 seed=args.seed))
        payload = dimacs.write_dimacs_cnf(phi)
        config = {"command": "gen", "what": "planar-cnf",
                  "vars": args.vars, "clauses": args.clauses,
                  "arity": args.arity, "delta": args.delta,
                  "seed": args.seed, "out": args.out}
        result = {"vars": phi.n, "clauses": phi.m,
                  "added_clause_indices": sorted(int(i) for i in added)}
    with open(args.out, "w") as fh:
        fh.write(payload)
    _emit(_report("gen", config, result), args.out + ".meta.json")
    return 0


def _interdict_config(args):
    fields = {"w": args.w, "s0_policy": args.s0,
              "max_cut_rounds": args.max_rounds, "seed": args.seed}
    if args.bag_cap is not None:
        fields["bag_cap"] = args.bag_cap
    if args.leaf_size is not None:
        fields["leaf_size"] = args.leaf_size
    if args.tol_cut is not None:
        fields["tol_cut"] = args.tol_cut
    return InterdictConfig(**fields)


def _cmd_interdict(args):
    g = _load_graph(args.input)
    cfg = _interdict_config(args)
    res = round_or_separate(g, args.w, config=cfg)
    config = {"command": "interdict", "input": args.input,
              "out": args.out}
    config.update(cfg.to_json_dict())
    result = res.to_json_dict()
    result["width"] = res.decomposition.width()
    _emit(_report("interdict", config, result), args.out)
    return 0


def _cmd_bsi(args):
    g = _load_graph(args.input)
    a_policy = _parse_a(args.a)
    best = bsi_solve(g, args.s, args.beta, a_policy=a_policy,
                     repeats=args.repeats, seed=args.seed)
    x_second = properize(g, best)
    config = {"command": "bsi", "input": args.input, "s": args.s,
              "beta": args.beta, "a": args.a, "repeats": args.repeats,
              "seed": args.seed, "out": args.out}
    result = best.to_json_dict()
    result["x_second"] = sorted(x_second)
    _emit(_report("bsi", config, result), args.out)
    return 0


def _mis_params(args):
    if args.preset == "paper":
        base = MisParams.from_epsilon(args.epsilon)
        s, beta = base.s, base.beta
    else:
        s, beta = 4, 0.25
    if args.s is not None:
        s = args.s
    if args.beta is not None:
        beta = args.beta
    return MisParams(s=s, beta=beta, a_policy=_parse_a(args.a),
                     repeats=args.repeats, seed=args.seed)


def _cmd_mis(args):
    g = _load_graph(args.input)
    params = _mis_params(args)
    rep = noisy_mis(g, params)
    config = {"command": "mis", "input": args.input, "preset": args.preset,
              "epsilon": args.epsilon, "out": args.out}
    config.update(params.to_json_dict())
    _emit(_report("mis", config, rep.to_json_dict()), args.out)
    return 0


def _cmd_maxsat(args):
    phi = _load_cnf(args.input)
    params = MaxSatParams(bag_cap=args.bag_cap, s0_policy=args.s0,
                          max_cut_rounds=args.max_rounds, seed=args.seed,
                          leaf_size=args.leaf_size,
                          width_cap=args.width_cap)
    rep = noisy_maxsat(phi, args.w, params)
    config = {"command": "maxsat", "input": args.input, "w": args.w,
              "out": args.out}
    config.update(params.to_json_dict())
    _emit(_report("maxsat", config, rep.to_json_dict()), args.out)
    return 0


def _cmd_oracle(args):
    config = {"command": "oracle", "problem": args.problem,
              "input": args.input, "w": args.w, "out": args.out}
    if args.problem == "mis":
        sol = exact_mis(_load_graph(args.input))
        result = {"alpha": len(sol), "solution": sorted(sol)}
    elif args.problem == "maxsat":
        count, assign = exact_maxsat(_load_cnf(args.input))
        result = {"opt": count, "assignment": [bool(b) for b in assign]}
    elif args.problem == "treewidth":
        tw, t = exact_treewidth(_load_graph(args.input))
        result = {"treewidth": tw, "decomposition": t.to_json_dict()}
    elif args.problem == "link":
        result = {"link_number": link_number(_load_graph(args.input))}
    else:
        if args.w is None:
            raise ValueError("oracle interdiction requires --w")
        f_set, t = exact_interdiction(_load_graph(args.input), args.w)
        result = {"size": len(f_set),
                  "F": [list(e) for e in sorted(f_set)],
                  "decomposition": t.to_json_dict()}
    _emit(_report("oracle", config, result), args.out)
    return 0


def _edges_from_json(pairs):
    return frozenset((min(u, v), max(u, v)) for u, v in pairs)


def _verify_gen(report, instance):
    problems = []
    config = report["config"]
    with open(instance) as fh:
        text = fh.read()
    if config["what"] == "grid":
        g = dimacs.read_dimacs_graph(text)
        if g.n != report["result"]["n"]:
            problems.append("vertex count %d != reported %d"
                            % (g.n, report["result"]["n"]))
        if len(g.edges) != report["result"]["edges"]:
            problems.append("edge count %d != reported %d"
                            % (len(g.edges), report["result"]["edges"]))
        noise = _edges_from_json(report["result"]["noise_edges"])
        if not noise <= g.edges:
            problems.append("noise edges missing from the instance")
    else:
        phi = dimacs.read_dimacs_cnf(text)
        if phi.m != report["result"]["clauses"]:
            problems.append("clause count %d != reported %d"
                            % (phi.m, report["result"]["clauses"]))
        for idx in report["result"]["added_clause_indices"]:
            if not 0 <= idx < phi.m:
                problems.append("added clause index %d out of range" % idx)
    return problems


def _verify_interdict(report, instance):
    problems = []
    g = _load_graph(instance)
    result = report["result"]
    f_set = _edges_from_json(result["F"])
    if not f_set <= g.edges:
        problems.append("F contains edges outside the instance")
    t = TreeDecomposition.from_json_dict(result["decomposition"])
    remaining = Graph(g.n, g.edges - f_set)
    check = validate(t, remaining)
    if not check.ok:
        problems.append(check.violation)
    bag_cap = report["config"].get("bag_cap")
    if bag_cap is not None and t.width() > bag_cap - 1:
        problems.append("width %d exceeds bag cap %d - 1"
                        % (t.width(), bag_cap))
    return problems


def _verify_bsi(report, instance):
    problems = []
    g = _load_graph(instance)
    result = report["result"]
    s = report["config"]["s"]
    x_prime = frozenset(result["x_prime"])
    pieces = [frozenset(p) for p in result["pieces"]]
    seen = set()
    for piece in pieces:
        if len(piece) > s:
            problems.append("piece %r larger than s=%d"
                            % (sorted(piece), s))
        if seen & piece:
            problems.append("pieces overlap at %r" % sorted(seen & piece))
        seen |= piece
    if seen | x_prime != set(g.vertices) or seen & x_prime:
        problems.append("pieces plus deletions do not partition V")
    owner = {}
    for idx, piece in enumerate(pieces):
        for v in piece:
            owner[v] = idx
    cross = frozenset(
        e for e in g.edges
        if e[0] in owner and e[1] in owner and owner[e[0]] != owner[e[1]])
    if cross != _edges_from_json(result["cross_edges"]):
        problems.append("cross edge set does not match the partition")
    x_second = frozenset(result["x_second"])
    for (u, v) in cross:
        if u not in x_second and v not in x_second:
            problems.append("cross edge (%d, %d) uncovered by x_second"
                            % (u, v))
    return problems


def _verify_mis(report, instance):
    problems = []
    g = _load_graph(instance)
    result = report["result"]
    solution = frozenset(result["solution"])
    if result["objective"] != len(solution):
        problems.append("objective %d != solution size %d"
                        % (result["objective"], len(solution)))
    for (u, v) in sorted(g.edges):
        if u in solution and v in solution:
            problems.append("solution contains adjacent pair (%d, %d)"
                            % (u, v))
            break
    x_second = frozenset(result["x_second"])
    if solution & x_second:
        problems.append("solution overlaps the deleted set")
    s = report["config"]["s"]
    kept = [e for e in g.edges if not (set(e) & x_second)]
    for comp in connected_components(Graph(g.n, kept)):
        if comp & x_second:
            continue
        if len(comp) > s:
            problems.append("component of size %d exceeds s=%d"
                            % (len(comp), s))
            break
    return problems


def _verify_maxsat(report, instance):
    problems = []
    phi = _load_cnf(instance)
    result = report["result"]
    assignment = tuple(bool(b) for b in result["assignment"])
    if len(assignment) != phi.n:
        problems.append("assignment length %d != %d variables"
                        % (len(assignment), phi.n))
        return problems
    deleted = set(result["deleted_clauses"])
    if not all(0 <= ci < phi.m for ci in deleted):
        problems.append("deleted clause index out of range")
        return problems
    hit = set()
    for (u, v) in _edges_from_json(result["f_set"]):
        clause_end = u if u >= phi.n else v
        if clause_end < phi.n:
            problems.append("f_set edge (%d, %d) is not variable-to-clause"
                            % (u, v))
            return problems
        hit.add(clause_end - phi.n)
    if hit != deleted:
        problems.append("deleted clauses %r do not match f_set hits %r"
                        % (sorted(deleted), sorted(hit)))
    survivors = [sorted(phi.clauses[ci]) for ci in range(phi.m)
                 if ci not in deleted]
    recount = count_satisfied(CnfFormula(phi.n, survivors), assignment)
    if recount != result["objective"]:
        problems.append("objective %d but assignment satisfies %d "
                        "surviving clauses" % (result["objective"], recount))
    return problems


_VERIFIERS = {
    "gen": _verify_gen,
    "interdict": _verify_interdict,
    "bsi": _verify_bsi,
    "mis": _verify_mis,
    "maxsat": _verify_maxsat,
}


def _cmd_verify(args):
    with open(args.report) as fh:
        report = json.load(fh)
    if report.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("unsupported schema_version %r"
                         % report.get("schema_version"))
    kind = report.get("kind")
    if kind not in _VERIFIERS:
        raise ValueError("no verifier for report kind %r" % kind)
    instance = args.instance
    if instance is None:
        config = report.get("config", {})
        instance = config.get("input") or config.get("out")
    if instance is None:
        raise ValueError("report names no instance; pass --instance")
    problems = _VERIFIERS[kind](report, instance)
    if problems:
        for problem in problems:
            print("verify failed: %s" % problem, file=sys.stderr)
        return 1
    print("ok: %s report verified against %s" % (kind, instance))
    return 0


def _add_common(sub, out=True, seed=True):
    if out:
        sub.add_argument("--out", default=None,
                         help="report path (default: stdout)")
    if seed:
        sub.add_argument("--seed", type=int, default=0)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="twcut",
        description="Treewidth interdiction, bounded-size partition, and "
                    "noisy MIS / MaxSAT pipelines.")
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("gen", help="generate an instance plus a "
                                      "ground-truth sidecar")
    gen.add_argument("what", choices=("grid", "planar-cnf"))
    gen.add_argument("--side", type=int, default=5,
                     help="grid side length")
    gen.add_argument("--vars", type=int, default=12)
    gen.add_argument("--clauses", type=int, default=12)
    gen.add_argument("--arity", type=int, default=3, choices=(2, 3))
    gen.add_argument("--delta", type=float, default=0.0,
                     help="noise rate: floor(delta * size) additions")
    _add_common(gen)
    gen.set_defaults(func=_cmd_gen)

    interdict = subs.add_parser("interdict",
                                help="edge interdiction to bounded width")
    interdict.add_argument("input", help="DIMACS graph file")
    interdict.add_argument("--w", type=int, required=True)
    interdict.add_argument("--max-rounds", type=int, default=60,
                           dest="max_rounds")
    interdict.add_argument("--s0", default="degree",
                           help="initial terminals: degree or all")
    interdict.add_argument("--bag-cap", type=int, default=None,
                           dest="bag_cap")
    interdict.add_argument("--leaf-size", type=int, default=None,
                           dest="leaf_size")
    interdict.add_argument("--tol-cut", type=float, default=None,
                           dest="tol_cut")
    _add_common(interdict)
    interdict.set_defaults(func=_cmd_interdict)

    bsi = subs.add_parser("bsi", help="bounded-size partition via the "
                                      "configuration LP")
    bsi.add_argument("input", help="DIMACS graph file")
    bsi.add_argument("--s", type=int, required=True)
    bsi.add_argument("--beta", type=float, required=True)
    bsi.add_argument("--a", default="auto",
                     help="deletion budget: auto, an int, or a comma list")
    bsi.add_argument("--repeats", type=int, default=10)
    _add_common(bsi)
    bsi.set_defaults(func=_cmd_bsi)

    mis = subs.add_parser("mis", help="independent set on a noisy graph")
    mis.add_argument("input", help="DIMACS graph file")
    mis.add_argument("--preset", choices=("paper", "fast"), default="fast",
                     help="paper: proof constants from --epsilon; "
                          "fast: small s and beta")
    mis.add_argument("--epsilon", type=float, default=0.5)
    mis.add_argument("--s", type=int, default=None)
    mis.add_argument("--beta", type=float, default=None)
    mis.add_argument("--a", default="auto")
    mis.add_argument("--repeats", type=int, default=10)
    _add_common(mis)
    mis.set_defaults(func=_cmd_mis)

    maxsat = subs.add_parser("maxsat", help="MaxSAT on a noisy near-planar "
                                            "formula")
    maxsat.add_argument("input", help="DIMACS CNF file")
    maxsat.add_argument("--w", type=int, required=True)
    maxsat.add_argument("--max-rounds", type=int, default=60,
                        dest="max_rounds")
    maxsat.add_argument("--s0", default="degree")
    maxsat.add_argument("--bag-cap", type=int, default=None, dest="bag_cap")
    maxsat.add_argument("--leaf-size", type=int, default=None,
                        dest="leaf_size")
    maxsat.add_argument("--width-cap", type=int, default=18,
                        dest="width_cap")
    _add_common(maxsat)
    maxsat.set_defaults(func=_cmd_maxsat)

    oracle = subs.add_parser("oracle", help="exact solvers for small "
                                            "instances")
    oracle.add_argument("problem", choices=("mis", "maxsat", "treewidth",
                                            "link", "interdiction"))
    oracle.add_argument("input")
    oracle.add_argument("--w", type=int, default=None)
    _add_common(oracle, seed=False)
    oracle.set_defaults(func=_cmd_oracle)

    verify = subs.add_parser("verify", help="re-check a report against "
                                            "its instance")
    verify.add_argument("report", help="report JSON path")
    verify.add_argument("--instance", default=None,
                        help="instance path (default: from the report)")
    verify.set_defaults(func=_cmd_verify)

    return parser


def cli_main(argv=None):
    logging.basicConfig(
        level=os.environ.get("TWCUT_LOG", "WARNING").upper())
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print("solver failure: %s" % exc, file=sys.stderr)
        return 1


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
