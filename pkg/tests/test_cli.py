import json

import numpy as np
import pytest

from regmaps import __version__
from regmaps.cli import EXIT_CAP, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main
from regmaps.groups import ORDER_CAP, TABLE_CAP, _build_group_cached
from regmaps.suites import load_suites, run_suite


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table_rows(out):
    return [line for line in out.splitlines()[2:] if line]


def test_enumerate_psl27(capsys):
    code, out, _ = run(capsys, "enumerate", "psl2:7")
    assert code == EXIT_OK
    rows = table_rows(out)
    assert len(rows) == 5
    assert out.splitlines()[1].split("\t") == ["id", "type", "r", "genus", "reflexibility", "trace", "cotrace"]


def test_enumerate_dihedral2_and_s4(capsys):
    _, out, _ = run(capsys, "enumerate", "dihedral:2")
    rows = [r.split("\t") for r in table_rows(out)]
    assert [(r[1], r[3]) for r in rows] == [("{2,2}", "0")]
    _, out, _ = run(capsys, "enumerate", "sym:4")
    assert sorted(r.split("\t")[1] for r in table_rows(out)) == ["{3,4}", "{4,3}"]


def test_enumerate_json_and_filters(capsys, tmp_path):
    path = tmp_path / "maps.json"
    code, _, _ = run(capsys, "enumerate", "psl2:7", "--json", str(path))
    doc = json.loads(path.read_text())
    assert code == 0 and doc["aut_order"] == 336 and len(doc["maps"]) == 5 and doc["version"] == __version__
    code, out, _ = run(capsys, "enumerate", "psl2:7", "--json", "-", "--valency", "7", "--face", "7")
    assert [m["type"] for m in json.loads(out)["maps"]] == ["{7,7}"]


def test_graph_dot_fig6(capsys):
    code, out, _ = run(capsys, "graph", "psl2:7", "--ops", "D,H2", "--format", "dot")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "digraph atlas {" and lines[-1] == "}"
    assert sum("[label=\"{" in l for l in lines) == 5
    arcs = [l for l in lines if 'label="H2"' in l]
    dashed = [l for l in lines if "style=dashed" in l]
    assert len(arcs) == 3 and all("dir=none" not in l for l in arcs)
    assert len(dashed) == 2


def test_graph_alt4_single_vertex(capsys):
    _, out, _ = run(capsys, "graph", "alt:4")
    doc = json.loads(out)
    assert len(doc["maps"]) == 1 and doc["edges"] == []


def test_graph_agl1_32(capsys, tmp_path):
    path = tmp_path / "g.json"
    code, _, _ = run(capsys, "graph", "agl1:32", "--ops", "D,H3,H-1", "-o", str(path))
    doc = json.loads(path.read_text())
    assert code == 0 and len(doc["maps"]) == 6
    h3 = [e for e in doc["edges"] if e["label"] == "H3"]
    assert len(h3) == 6 and all(e["directed"] for e in h3)
    pairs = lambda lab: {(e["src"], e["dst"]) for e in doc["edges"] if e["label"] == lab}
    assert pairs("D") == pairs("H-1") and len(pairs("D")) == 3


def test_graph_output_identical_across_jobs(capsys):
    outs = [run(capsys, "--jobs", str(j), "graph", "sym:5", "--format", fmt)[1]
            for fmt in ("json", "dot") for j in (1, 3)]
    assert outs[0] == outs[1] and outs[2] == outs[3]


def test_jobs_env(capsys, monkeypatch):
    monkeypatch.setenv("REGMAPS_JOBS", "2")
    base = run(capsys, "enumerate", "alt:5")
    monkeypatch.setenv("REGMAPS_JOBS", "x")
    assert run(capsys, "enumerate", "alt:5")[0] == EXIT_USAGE
    monkeypatch.delenv("REGMAPS_JOBS")
    assert run(capsys, "enumerate", "alt:5")[1] == base[1]
    assert run(capsys, "--jobs", "0", "enumerate", "alt:5")[0] == EXIT_USAGE


@pytest.mark.parametrize("method", ["direct", "moebius", "formula"])
def test_count_a5(capsys, method):
    code, out, _ = run(capsys, "count", "alt:5" if method != "formula" else "psl2:4", "--method", method)
    doc = json.loads(out)
    assert code == 0 and doc["o_size"] == 3 and doc["phi"] == 360


def test_count_cyclic_reports_both_conventions(capsys):
    _, out, _ = run(capsys, "count", "cyclic:2")
    doc = json.loads(out)
    assert doc["phi"] == 3 and doc["o_size"] == 3 and doc["o_size_involutory"] == 2


def test_count_triples_flag(capsys):
    _, out, _ = run(capsys, "count", "psl2:7", "--triples")
    doc = json.loads(out)
    per = {(t["X"], t["Z"]): t for t in doc["per_class_triples"]}
    assert per[("7A", "7A")]["generating"] == 168 and ("7A", "7B") not in per


def test_count_formula_rejects_odd(capsys):
    assert run(capsys, "count", "psl2:7", "--method", "formula")[0] == EXIT_USAGE


def test_triples(capsys):
    _, out, _ = run(capsys, "triples", "psl2:7", "7A", "2A", "7A")
    assert json.loads(out)["total"] == 168
    code, out, _ = run(capsys, "triples", "psl2:7")
    assert code == 0 and len(out.splitlines()) == 7
    assert run(capsys, "triples", "psl2:7", "7A", "2A")[0] == EXIT_USAGE
    assert run(capsys, "triples", "psl2:7", "7A", "2A", "9Q")[0] == EXIT_USAGE


def test_holes(capsys):
    _, out, _ = run(capsys, "enumerate", "psl2:7", "--json", "-")
    klein = next(m["id"] for m in json.loads(out)["maps"] if m["type"] == "{3,7}")
    code, out, _ = run(capsys, "holes", "psl2:7", "--map", str(klein), "--words", "2,4;1,-1")
    doc = json.loads(out)
    assert code == 0 and doc["label"] == "{3,7}_8"
    assert doc["hole_lengths"]["3"] == 4 and doc["isotactic_orders"] == {"2,4": 3, "1,-1": 4}
    assert run(capsys, "holes", "psl2:7", "--map", "9")[0] == EXIT_USAGE
    assert run(capsys, "holes", "psl2:7", "--map", "0", "--words", "a,b")[0] == EXIT_USAGE


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "psl2_7")
    assert code == EXIT_OK and out.splitlines()[-1].startswith("PASS")
    code, out, _ = run(capsys, "verify", "s5")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "verify", "--list")
    assert "sl2_8" in out
    assert run(capsys, "verify", "nope")[0] == EXIT_USAGE


def test_verify_failing_suite_file(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"suites": [{"name": "bad", "group": "alt:4",
                                            "facts": [{"check": "map_count", "expected": 2}]}]}))
    code, out, _ = run(capsys, "verify", "all", "--suites-file", str(path))
    assert code == EXIT_VERIFY
    assert "[FAIL] bad/map_count: computed=1 expected=2" in out


def corrupted_group(spec="psl2:7"):
    G = _build_group_cached.__wrapped__(spec, ORDER_CAP, TABLE_CAP)
    T = G.table.copy()
    a, b = (int(v) for v in np.flatnonzero(G.orders == 7)[:2])
    T[G.table == a], T[G.table == b] = b, a
    G.table = T
    return G


def test_verify_all_on_corrupted_table_fails_with_diagnostics():
    suites = load_suites()
    results = run_suite(suites["psl2_7"], group=corrupted_group())
    failed = [r for r in results if not r.passed]
    assert failed
    assert all(r.line().startswith("[FAIL]") for r in failed)
    assert all(r.error or r.computed != r.expected for r in failed)


def test_cap_exit_code(capsys):
    code, _, err = run(capsys, "enumerate", "sym:8")
    assert code == EXIT_CAP and "cap" in err


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "enumerate", "nonsense:3")[0] == EXIT_USAGE
    assert run(capsys)[0] == EXIT_USAGE
    assert run(capsys, "graph", "psl2:7", "--ops", "H0")[0] == EXIT_USAGE
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "--config", str(cfg), "enumerate", "alt:4")[0] == EXIT_USAGE
    assert run(capsys, "--config", str(tmp_path / "missing.json"), "enumerate", "alt:4")[0] == EXIT_USAGE


def test_config_caps(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"order_cap": 100}))
    assert run(capsys, "--config", str(cfg), "enumerate", "psl2:7")[0] == EXIT_CAP
    cfg.write_text(json.dumps({"lattice_cap": 100}))
    assert run(capsys, "--config", str(cfg), "count", "psl2:7", "--method", "moebius")[0] == EXIT_CAP
    cfg.write_text(json.dumps({"ops": "D"}))
    _, out, _ = run(capsys, "--config", str(cfg), "graph", "psl2:7")
    assert {e["label"] for e in json.loads(out)["edges"]} == {"D"}


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and __version__ in out
