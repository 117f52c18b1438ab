import json

import pytest

from dmlbench.cli import run
from dmlbench.torus import frobenius_instance


@pytest.fixture
def frob(tmp_path):
    path = tmp_path / "frob2.json"
    path.write_text(json.dumps(frobenius_instance(4096)))
    return path


def test_return_set(frob, tmp_path):
    out = tmp_path / "r.json"
    assert run(["return-set", "--instance", str(frob), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["ns"] == [2**k for k in range(13)]
    assert rep["provenance"]["instance_sha256"] and rep["mode"] == "exact"


def test_return_set_is_deterministic(frob, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["return-set", "--instance", str(frob), "--mode", "montecarlo", "--seed", "7", "--max-m", "512"]
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["provenance"]["seed"] == 7 and rep["error_bound"] <= 2**-20


def test_digits(capsys):
    assert run(["digits", "--p", "2", "--m", "2", "--max", "63", "--ones-only"]) == 0
    assert capsys.readouterr().out.strip() == "15"


def test_selftest():
    assert run(["selftest"]) == 0


def test_certify_writes_csv(frob, tmp_path):
    csv_path, out = tmp_path / "p.csv", tmp_path / "c.json"
    code = run(["certify", "--instance", str(frob), "--checkpoints", "64,256,1024,4096", "--csv", str(csv_path), "--out", str(out)])
    assert code == 0
    assert csv_path.read_text().splitlines()[0] == "M,count,ratio,A_min"
    rep = json.loads(out.read_text())
    assert rep["certificate"]["verdict"] == "consistent"


def test_decompose_set_instance(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"kind": "certify", "payload": {"S": sorted(list(range(0, 101, 2)) + [7]), "M": 100, "pform": {"m": 1, "c": [7], "a": [1], "p": 2}}}))
    out = tmp_path / "d.json"
    assert run(["decompose", "--instance", str(path), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["decomposition"]["progressions"] == [{"a": 2, "b": 0, "onset": 0}]
    assert rep["decomposition"]["sparse"] == [7]
    assert rep["pform_match"]["matched"] is False


def test_solve_and_reduce(tmp_path):
    eq = {
        "lhs": {"terms": [{"q_coeffs": ["0/1", "1/1"], "mu": 1}]},
        "rhs": [{"c": "1", "lambda": 2, "a": 1}],
        "M": 100,
        "K_max": 7,
        "checkpoints": [8, 64, 100],
    }
    path = tmp_path / "eq.json"
    path.write_text(json.dumps({"kind": "polyexp", "payload": eq}))
    out, csv_path = tmp_path / "s.json", tmp_path / "s.csv"
    assert run(["solve", "--instance", str(path), "--out", str(out), "--csv", str(csv_path)]) == 0
    rep = json.loads(out.read_text())
    assert [s["n"] for s in rep["solutions"]] == [1, 2, 4, 8, 16, 32, 64]
    assert rep["classification"] == "case1" and len(rep["profile"]) == 3
    out2 = tmp_path / "r.json"
    assert run(["reduce", "--instance", str(path), "--out", str(out2)]) == 0
    rep = json.loads(out2.read_text())
    assert rep["covered_ns"] == [1, 2, 4, 8, 16, 32, 64]
    assert "fitted_constants" in rep


def test_validation_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 2,\n')
    assert run(["return-set", "--instance", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"p": 2, "N": 1}))
    assert run(["return-set", "--instance", str(wrong)]) == 2
    assert "field" in capsys.readouterr().err
    assert run(["frobnicate"]) == 2
    assert run(["return-set"]) == 2


def test_resource_error_exit_code(frob):
    assert run(["return-set", "--instance", str(frob), "--max-m", "65536", "--mode", "exact"]) == 3
