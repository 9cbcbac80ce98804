import json

import pytest

from higgins.cli import main
from higgins.corpus import algebras, groups
from higgins import nhsolver
from higgins.exactlinalg import FieldSpec


@pytest.fixture()
def files(tmp_path):
    Q8, N4 = groups()["Q8"], algebras()["N4(F2)"]
    (tmp_path / "q8.json").write_text(json.dumps(Q8.to_json()))
    (tmp_path / "ut4_f2.json").write_text(json.dumps(N4.to_json()))
    for lab in "ijk":
        (tmp_path / f"{lab}.json").write_text(json.dumps({"generators": [Q8.element(lab)]}))
    (tmp_path / "lie_q.json").write_text(json.dumps(nhsolver.lie(FieldSpec.rational()).to_json()))
    return tmp_path


def run(capsys, argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, [json.loads(l) for l in out.splitlines()], err


def test_commutator(capsys, files):
    code, lines, err = run(capsys, ["commutator", "--structure", files / "q8.json",
                                    *sum((["--sub", files / f"{c}.json"] for c in "ijk"), [])])
    assert code == 0 and lines[0]["value"] == "{1}" and lines[0]["certainty"] == "exact"
    assert "commutator" in err and lines[0]["seed"] == 0


def test_lcs_both(capsys, files):
    code, lines, _ = run(capsys, ["lcs", "--structure", files / "ut4_f2.json", "--mode", "both", "--max-n", "5"])
    assert code == 0 and [l["sizes"] for l in lines] == [[6, 3, 1, 0, 0]] * 2


def test_nh_solve(capsys, files):
    code, lines, _ = run(capsys, ["nh-solve", "--presentation", files / "lie_q.json"])
    lam = lines[0]["lambda"]
    assert code == 0 and lines[0]["solution"] and lines[0]["residuals_vanish"]
    assert lam["lambda5"] == 1  # coefficient on (zx)y
    code, lines, _ = run(capsys, ["nh-solve", "--builtin", "empty"])
    assert code == 0 and not lines[0]["solution"]
    code, lines, _ = run(capsys, ["nh-solve", "--builtin", "associative", "--field", "F5"])
    assert lines[0]["field_caveat"]


def test_verify_and_out(capsys, files, tmp_path):
    out = tmp_path / "r.jsonl"
    code = main(["verify", "three-subobjects", "--structure", str(files / "q8.json"), "--out", str(out),
                 *sum((["--sub", str(files / f"{c}.json")] for c in "ijk"), [])])
    rep = json.loads(out.read_text())
    assert code == 0 and rep["status"] == "pass" and set(rep) >= {"check", "instance", "status", "witness", "certainty"}


def test_huq_closure_and_bundled_names(capsys):
    code, lines, _ = run(capsys, ["huq", "--structure", "S3", "--sub", "X", "--sub", "X"])
    assert code == 0 and lines[0]["size"] == 3
    code, lines, _ = run(capsys, ["closure", "--structure", "S3", "--sub", "X"])
    assert lines[0]["agree"]


@pytest.mark.parametrize("payload,fragment", [
    ('{"kind":"group","order":2,"table":[[0,1],[1,1]]}', "not a permutation"),
    ('{"kind":"group","order":2', "invalid JSON"),
    ('{"kind":"ring"}', "unknown structure kind"),
])
def test_malformed_input_exits_2(capsys, tmp_path, payload, fragment):
    p = tmp_path / "bad.json"
    p.write_text(payload)
    code, lines, err = run(capsys, ["commutator", "--structure", p, "--sub", "X", "--sub", "X"])
    assert code == 2 and str(p) in err and fragment in err


def test_bad_subobject_and_flags(capsys, files):
    bad = files / "bad_sub.json"
    bad.write_text('{"basis": [[1,1,0,0,0,0]]}')
    code, _, err = run(capsys, ["commutator", "--structure", files / "ut4_f2.json", "--sub", bad, "--sub", "X"])
    assert code == 2 and "$.basis" in err
    code, _, err = run(capsys, ["commutator", "--structure", "S3", "--sub", "X", "--sub", "X", "--bound", "0"])
    assert code == 2
    assert main(["frobnicate"]) == 2


def test_fail_exit_code(monkeypatch, capsys):
    from higgins import verify

    def fake(*a, **k):
        return [verify.VerificationReport("x", {}, "fail", {"element": "e"})]

    monkeypatch.setattr(verify, "corpus_reports", fake)
    assert main(["verify", "all"]) == 1


def test_verify_all_exits_zero(capsys):
    code = main(["verify", "all", "--seed", "1"])
    out, err = capsys.readouterr()
    statuses = {json.loads(l)["status"] for l in out.splitlines()}
    assert code == 0 and "fail" not in statuses and "pass" in statuses


def test_exported_corpus_files_round_trip(tmp_path):
    import subprocess
    import sys
    from pathlib import Path

    from higgins.structures import validate

    script = Path(__file__).resolve().parents[1] / "scripts" / "export_corpus.py"
    subprocess.run([sys.executable, str(script), "--dir", str(tmp_path)], check=True, capture_output=True)
    files = [p for p in tmp_path.glob("*.json") if "kind" in json.loads(p.read_text())]
    assert len(files) >= 20
    for p in files:
        raw = json.loads(p.read_text())
        assert validate(raw).to_json() == raw
