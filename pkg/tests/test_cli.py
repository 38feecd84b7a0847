"""End-to-end tests for the command-line frontend."""

import json

import pytest

from twcut import dimacs
from twcut.cli import cli_main
from twcut.oracles import exact_maxsat, exact_mis, exact_treewidth

from helpers import complete_graph, path_graph


def _body_bytes(path):
    with open(path) as fh:
        report = json.load(fh)
    report.pop("timestamp")
    return json.dumps(report, indent=2, sort_keys=True).encode()


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def _write_graph(path, g):
    path.write_text(dimacs.write_dimacs_graph(g))
    return str(path)


def test_gen_grid_writes_instance_and_sidecar(tmp_path):
    out = tmp_path / "g.dimacs"
    rc = cli_main(["gen", "grid", "--side", "4", "--delta", "0.1",
                   "--seed", "3", "--out", str(out)])
    assert rc == 0
    g = dimacs.read_dimacs_graph(out.read_text())
    assert g.n == 16
    sidecar = _load(str(out) + ".meta.json")
    assert sidecar["schema_version"] == 1
    assert sidecar["kind"] == "gen"
    assert sidecar["result"]["edges"] == len(g.edges)
    assert len(sidecar["result"]["noise_edges"]) == 1
    assert cli_main(["verify", str(out) + ".meta.json"]) == 0


def test_gen_planar_cnf_roundtrip(tmp_path):
    out = tmp_path / "f.cnf"
    rc = cli_main(["gen", "planar-cnf", "--vars", "10", "--clauses", "8",
                   "--arity", "3", "--delta", "0.25", "--seed", "1",
                   "--out", str(out)])
    assert rc == 0
    phi = dimacs.read_dimacs_cnf(out.read_text())
    assert phi.m == 10
    sidecar = _load(str(out) + ".meta.json")
    assert len(sidecar["result"]["added_clause_indices"]) == 2
    assert cli_main(["verify", str(out) + ".meta.json"]) == 0


def test_gen_requires_out(capsys):
    assert cli_main(["gen", "grid"]) == 2
    assert "requires --out" in capsys.readouterr().err


def test_interdict_tree_deletes_nothing(tmp_path):
    tree = path_graph(7)
    instance = _write_graph(tmp_path / "tree.dimacs", tree)
    out = tmp_path / "report.json"
    rc = cli_main(["interdict", instance, "--w", "2", "--out", str(out)])
    assert rc == 0
    report = _load(str(out))
    assert report["result"]["F"] == []
    assert report["result"]["stats"]["lp_lower_bound"] == 0.0
    assert cli_main(["verify", str(out)]) == 0


def test_verify_names_uncovered_edge(tmp_path, capsys):
    g = path_graph(6)
    instance = _write_graph(tmp_path / "path.dimacs", g)
    out = tmp_path / "report.json"
    assert cli_main(["interdict", instance, "--w", "1",
                     "--out", str(out)]) == 0
    report = _load(str(out))
    bags = report["result"]["decomposition"]["bags"]
    f_set = {tuple(sorted(e)) for e in report["result"]["F"]}
    remaining = sorted(g.edges - f_set)
    target = None
    for (u, v) in remaining:
        elsewhere = any(v in bag and u not in bag for bag in bags.values())
        if elsewhere:
            target = (u, v)
            break
    assert target is not None
    u, v = target
    for bag in bags.values():
        if u in bag and v in bag:
            bag.remove(v)
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(report))
    assert cli_main(["verify", str(tampered)]) == 1
    err = capsys.readouterr().err
    assert "edge (%d, %d)" % (u, v) in err


def test_bsi_report_verifies(tmp_path):
    instance = _write_graph(tmp_path / "grid.dimacs", path_graph(6))
    out = tmp_path / "bsi.json"
    rc = cli_main(["bsi", instance, "--s", "2", "--beta", "0.3",
                   "--a", "0,1,2", "--repeats", "4", "--out", str(out)])
    assert rc == 0
    report = _load(str(out))
    assert report["kind"] == "bsi"
    assert "x_second" in report["result"]
    assert cli_main(["verify", str(out)]) == 0


def test_mis_reports_are_deterministic(tmp_path):
    gpath = tmp_path / "g.dimacs"
    assert cli_main(["gen", "grid", "--side", "4", "--delta", "0.1",
                     "--seed", "3", "--out", str(gpath)]) == 0
    out = tmp_path / "mis.json"
    argv = ["mis", str(gpath), "--s", "4", "--beta", "0.25",
            "--a", "0,1,2", "--repeats", "5", "--out", str(out)]
    assert cli_main(argv) == 0
    first = _body_bytes(str(out))
    assert cli_main(argv) == 0
    second = _body_bytes(str(out))
    assert first == second
    assert cli_main(["verify", str(out)]) == 0


def test_mis_paper_preset(tmp_path):
    instance = _write_graph(tmp_path / "p.dimacs", path_graph(8))
    out = tmp_path / "mis.json"
    rc = cli_main(["mis", instance, "--preset", "paper",
                   "--epsilon", "0.5", "--repeats", "3", "--out", str(out)])
    assert rc == 0
    report = _load(str(out))
    assert report["config"]["s"] == 16
    assert report["config"]["beta"] == pytest.approx(0.5)
    assert cli_main(["verify", str(out)]) == 0


def test_maxsat_report_verifies(tmp_path):
    fpath = tmp_path / "f.cnf"
    assert cli_main(["gen", "planar-cnf", "--vars", "10", "--clauses", "8",
                     "--arity", "2", "--delta", "0.2", "--seed", "4",
                     "--out", str(fpath)]) == 0
    out = tmp_path / "ms.json"
    rc = cli_main(["maxsat", str(fpath), "--w", "2", "--out", str(out)])
    assert rc == 0
    report = _load(str(out))
    phi = dimacs.read_dimacs_cnf(fpath.read_text())
    opt, _ = exact_maxsat(phi)
    assert report["result"]["objective"] >= \
        opt - len(report["result"]["deleted_clauses"])
    assert cli_main(["verify", str(out)]) == 0


def test_oracle_matches_library_calls(tmp_path):
    g = complete_graph(4)
    instance = _write_graph(tmp_path / "k4.dimacs", g)
    out = tmp_path / "o.json"
    assert cli_main(["oracle", "mis", instance, "--out", str(out)]) == 0
    assert _load(str(out))["result"]["alpha"] == len(exact_mis(g))
    assert cli_main(["oracle", "treewidth", instance,
                     "--out", str(out)]) == 0
    tw, _ = exact_treewidth(g)
    assert _load(str(out))["result"]["treewidth"] == tw
    assert cli_main(["oracle", "link", instance, "--out", str(out)]) == 0
    assert _load(str(out))["result"]["link_number"] >= 1
    assert cli_main(["oracle", "interdiction", instance, "--w", "1",
                     "--out", str(out)]) == 0
    assert _load(str(out))["result"]["size"] >= 1


def test_oracle_interdiction_needs_w(tmp_path, capsys):
    instance = _write_graph(tmp_path / "k4.dimacs", complete_graph(4))
    assert cli_main(["oracle", "interdiction", instance]) == 2
    assert "requires --w" in capsys.readouterr().err


def test_bad_input_exit_codes(tmp_path, capsys):
    assert cli_main(["interdict", "missing.dimacs", "--w", "2"]) == 2
    instance = _write_graph(tmp_path / "p.dimacs", path_graph(4))
    assert cli_main(["bsi", instance, "--s", "2", "--beta", "9"]) == 2
    big = _write_graph(tmp_path / "grid.dimacs",
                       path_graph(12))
    assert cli_main(["oracle", "link", big]) == 2
    capsys.readouterr()


def test_solver_failure_exit_code(tmp_path, capsys):
    instance = _write_graph(tmp_path / "k4.dimacs", complete_graph(4))
    rc = cli_main(["interdict", instance, "--w", "1", "--s0", "all",
                   "--max-rounds", "1"])
    assert rc == 1
    assert "solver failure" in capsys.readouterr().err


def test_verify_rejects_unknown_reports(tmp_path, capsys):
    bogus = tmp_path / "r.json"
    bogus.write_text(json.dumps({"schema_version": 99}))
    assert cli_main(["verify", str(bogus)]) == 2
    bogus.write_text(json.dumps({"schema_version": 1, "kind": "mystery"}))
    assert cli_main(["verify", str(bogus)]) == 2
    capsys.readouterr()


def test_reports_print_to_stdout_without_out(tmp_path, capsys):
    instance = _write_graph(tmp_path / "p.dimacs", path_graph(4))
    rc = cli_main(["oracle", "mis", instance])
    assert rc == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["result"]["alpha"] == 2
