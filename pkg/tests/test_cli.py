import json
import subprocess
import sys

import pytest

from hypertope.catalog import COMPARED, catalog_inputs, compare, generate_rows, load_golden
from hypertope.cli import main
from hypertope.constructions import build_from_symbol
from hypertope.halving import halve
from hypertope.serialize import (cgroup_from_json, cgroup_to_json, diagram_to_dot, diagram_to_json, halving_from_json,
                                 halving_to_json, load)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# --- serialization -------------------------------------------------------

def test_cgroup_json_round_trip():
    C = build_from_symbol("delta2^{{4,3}}")
    doc = cgroup_to_json(C)
    assert set(doc) >= {"rank", "degree", "generators", "label"}
    assert all(isinstance(g, str) and g.startswith("(") for g in doc["generators"])
    D = cgroup_from_json(json.loads(json.dumps(doc)))
    assert D.same_generators(C) and D.toroid == C.toroid and D.formula == C.formula


def test_halving_json_round_trip():
    R = halve(build_from_symbol("delta2^{{5,3,3}}"))
    doc = halving_to_json(R)
    assert doc["halvedOrder"] == str(2**119 * 14400)
    assert doc["formulaLevel"] is True
    assert doc["halvedOrderFormula"] == "2^119 * 14400"
    back = halving_from_json(json.loads(json.dumps(doc)))
    assert back.index == 2 and back.s == 2 and back.diagram == R.diagram
    assert back.halved.same_generators(R.halved)


def test_diagram_renderings():
    R = halve(build_from_symbol("delta2^{{5,3}}"))
    dot = diagram_to_dot(R.diagram, tail=(2, 3))
    assert 'n0 -- n1 [label="5"];' in dot
    assert "n1 -- n2;" in dot and "n1 -- n3;" in dot
    assert "rank=same; n2; n3;" in dot
    doc = diagram_to_json(R.diagram)
    assert [(e["i"], e["j"], e["label"]) for e in doc["edges"]] == [(0, 1, 5), (1, 2, 3), (1, 3, 3)]


def test_load_rejects_bad_documents(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("[1, 2]")
    with pytest.raises(ValueError):
        load(path)


# --- commands ------------------------------------------------------------

def test_build_prints_order(capsys):
    code, out, _ = run(["build", "{5,3}"], capsys)
    assert code == 0 and "order:    120" in out
    code, out, _ = run(["build", "delta2^{{3}}"], capsys)
    assert "= 48" in out and "type:     {3,4}" in out
    code, out, _ = run(["build", "{4,4}:(2,2)"], capsys)
    assert "order:    64" in out


def test_build_halve_verify_round_trip(tmp_path, capsys):
    g = tmp_path / "g.json"
    h = tmp_path / "h.json"
    r = tmp_path / "r.json"
    assert run(["--out", str(g), "build", "delta2^{{3,3}}"], capsys)[0] == 0
    code, out, _ = run(["--out", str(h), "halve", str(g)], capsys)
    assert code == 0 and "index:    2" in out and "{3, 3^3}" in out
    code, out, _ = run(["--out", str(r), "verify", str(h), "--level", "full"], capsys)
    assert code == 0 and "overall: pass" in out
    report = json.loads(r.read_text())
    assert report["overall"] == "pass" and len(report["stages"]) == 7


def test_verify_exit_codes(tmp_path, capsys):
    h = tmp_path / "h.json"
    run(["--out", str(h), "halve", "dual:{4,3,3}/[0 1 2 3]^4"], capsys)
    code, out, _ = run(["verify", str(h)], capsys)
    assert code == 1 and "witness=" in out
    code, _, _ = run(["verify", "halve-me-not"], capsys)
    assert code == 3
    code, out, _ = run(["--cap-chambers", "10", "verify", "delta2^{{4,3}}"], capsys)
    assert code == 2


def test_halve_messages(capsys):
    code, out, _ = run(["halve", "{3,3}"], capsys)
    assert code == 0 and "index:    1" in out
    code, out, _ = run(["halve", "delta2^{{5,3}}"], capsys)
    assert "245760" in out
    code, out, _ = run(["halve", "delta2^{{5,3,3}}"], capsys)
    assert "2^119 * 14400" in out and "formula level" in out
    code, _, err = run(["halve", "{5}"], capsys)
    assert code == 3 and "rank" in err


def test_input_errors(capsys):
    assert run(["build", "{5,3"], capsys)[0] == 3
    assert run(["diagram", "nope.json"], capsys)[0] == 3


def test_classify_and_diagram(capsys):
    code, out, _ = run(["classify", "delta2^{{4,3}}"], capsys)
    assert code == 0 and "hyperbolic" not in out
    code, out, _ = run(["diagram", "{5}"], capsys)
    assert code == 0 and 'n0 -- n1 [label="5"];' in out
    code, out, _ = run(["diagram", "--format", "json", "{3,4}"], capsys)
    assert json.loads(out)["rank"] == 3


def test_outputs_are_deterministic(tmp_path, capsys):
    texts = []
    for k in range(2):
        path = tmp_path / f"v{k}.json"
        run(["--out", str(path), "verify", "delta2^{{3}}"], capsys)
        texts.append(path.read_bytes())
    assert texts[0] == texts[1]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["--out", str(a), "halve", "delta2^{{4,3}}"], capsys)
    run(["--out", str(b), "halve", "delta2^{{4,3}}"], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "hypertope", "build", "{3,3}"], capture_output=True, text=True)
    assert out.returncode == 0 and "order:    24" in out.stdout


# --- catalog -------------------------------------------------------------

def test_catalog_rank_4_matches_golden(capsys):
    code, out, err = run(["catalog", "--max-rank", "4"], capsys)
    assert code == 0, err
    assert "B~3" in out and "D4" in out


def test_catalog_detects_drift():
    rows = generate_rows(3)
    golden = [dict(g) for g in load_golden()]
    golden[1]["halvedOrder"] = "65"
    drift = compare(rows, golden)
    assert drift == ["rank 3 p=4: halvedOrder is '64', golden '65'"]


def test_catalog_golden_table_shape():
    golden = load_golden()
    assert [(g["rank"], g["p"]) for g in golden] == [(r, p) for r, p, _ in catalog_inputs(6)]
    for g in golden:
        assert set(COMPARED) <= set(g)
    classes = {(g["rank"], g["p"]): g["classification"] for g in golden}
    assert classes[(3, 3)] == "spherical" and classes[(3, 4)] == "euclidean"
    assert all(classes[(3, p)] == "hyperbolic" for p in range(5, 9))
    assert [classes[(4, p)] for p in (3, 4, 5)] == ["spherical", "euclidean", "hyperbolic"]
    assert [classes[(5, p)] for p in (3, 4, 5)] == ["spherical", "euclidean", "hyperbolic"]
    assert [classes[(6, p)] for p in (3, 4)] == ["spherical", "euclidean"]


def test_catalog_bad_rank(capsys):
    assert run(["catalog", "--max-rank", "9"], capsys)[0] == 3
