import json
import re
from pathlib import Path


from hrs_lab import cli
from hrs_lab.cli import Report, main
from hrs_lab.suites import FAIL, CheckResult

WS = Path(__file__).resolve().parents[1] / "workspaces"
A2, A3, ZERO = str(WS / "a2.toml"), str(WS / "a3.toml"), str(WS / "a2_zero.toml")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def machine(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "machine")
    return code, json.loads(out)


def test_check_torsion(capsys):
    code, rep = machine(capsys, "check-torsion", A2, "--trials", "5")
    assert code == 0 and rep["verdict"] == "pass"
    assert rep["facts"]["tilting"] is True
    assert rep["facts"]["classification"] == {"M": "torsion", "X": "mixed"}
    assert {c["name"] for c in rep["checks"]} == {"torsion.T1", "torsion.T2", "torsion.closure"}


def test_non_tilting_is_a_fact_not_a_failure(capsys):
    code, rep = machine(capsys, "check-torsion", ZERO, "--trials", "5")
    assert code == 0 and rep["facts"]["tilting"] is False
    assert any("degenerate" in w for w in rep["facts"]["warning"])


def test_tilt_table(capsys):
    code, out, _ = run(capsys, "tilt", A2, "--trials", "3")
    assert code == 0
    rows = [ln.split() for ln in out.splitlines() if re.match(r"^\s+(S2\[1\]|P1|S1)\s+\d", ln)]
    assert rows == [["S2[1]", "1", "0", "0"], ["P1", "0", "1", "1"], ["S1", "1", "0", "1"]]
    assert "verdict: pass" in out


def test_tilt_needs_tilting_pair(capsys):
    code, _, err = run(capsys, "tilt", ZERO)
    assert code == 2 and "not tilting" in err


def test_verify_suites(capsys):
    code, rep = machine(capsys, "verify", A3, "--suite", "lemma21", "--trials", "4")
    assert code == 0 and [c["name"] for c in rep["checks"]] == ["lemma21.exactness"]
    code, _, _ = run(capsys, "verify", ZERO, "--suite", "heart")
    assert code == 2
    code, rep = machine(capsys, "verify", ZERO, "--suite", "all", "--trials", "3")
    assert code == 0
    assert {c["name"]: c["verdict"] for c in rep["checks"]}["theorem"] == "not-run"


def test_verify_theorem_suite(capsys):
    code, rep = machine(capsys, "verify", A2, "--suite", "theorem", "--trials", "2")
    assert code == 0
    assert {c["name"] for c in rep["checks"]} == {"theorem.cover", "theorem.compatibility", "theorem.naturality",
                                                  "theorem.exactness", "theorem.resolution"}


def test_single_trial_replay(capsys):
    code, rep = machine(capsys, "verify", A2, "--suite", "torsion", "--trial", "7")
    assert code == 0 and all(c["trials"] == 1 for c in rep["checks"])


def test_failing_check_exits_1(capsys, monkeypatch):
    def broken(*args, **kwargs):
        return [CheckResult("torsion.T1", FAIL, 1, [{"trial": 0, "seed": 0, "module": {"dims": [1, 0]}}])]
    monkeypatch.setattr(cli, "run_suites", broken)
    code, out, _ = run(capsys, "verify", A2, "--suite", "torsion")
    assert code == 1
    assert "failing witness" in out and "verdict: fail" in out


def test_resolve(capsys):
    code, rep = machine(capsys, "resolve", A2, "stalkS2")
    assert code == 0
    assert sorted(rep["witnesses"]["resolved"]["terms"]) == ["0", "1"]
    code, rep = machine(capsys, "resolve", A2, "torsion")
    assert code == 0 and rep["facts"]["unchanged"] is True
    code, _, err = run(capsys, "resolve", A2, "nope")
    assert code == 2 and "unknown complex" in err


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "tilt", str(tmp_path / "missing.toml"))[0] == 2
    assert run(capsys, "bogus-command", A2)[0] == 2
    assert run(capsys, "verify", A2, "--suite", "nope")[0] == 2
    bad = tmp_path / "bad.toml"
    bad.write_text((WS / "a2.toml").read_text().replace("arrows = { a = [[1]] }", "arrows = { a = [[1, 1]] }"))
    code, _, err = run(capsys, "check-torsion", str(bad))
    assert code == 2 and "modules.M.arrows.a" in err and "line" in err


def _strip_timing(rep: dict) -> dict:
    rep = dict(rep)
    rep.pop("timing")
    rep["checks"] = [{k: v for k, v in c.items() if k != "seconds"} for c in rep["checks"]]
    return rep


def test_deterministic_and_seeded(capsys, monkeypatch):
    args = ("verify", A2, "--suite", "heart", "--trials", "3", "--seed", "11")
    _, r1 = machine(capsys, *args)
    _, r2 = machine(capsys, *args)
    assert _strip_timing(r1) == _strip_timing(r2)
    monkeypatch.setenv("HRS_LAB_SEED", "11")
    _, r3 = machine(capsys, "verify", A2, "--suite", "heart", "--trials", "3")
    assert r3["seed"] == 11 and _strip_timing(r3)["checks"] == _strip_timing(r1)["checks"]


def test_machine_report_round_trip(capsys):
    _, out, _ = run(capsys, "check-torsion", A2, "--trials", "3", "--format", "machine")
    rep = Report.from_json(out)
    assert json.loads(rep.to_json()) == json.loads(out)
    assert rep.verdicts() == {"torsion.T1": "pass", "torsion.T2": "pass", "torsion.closure": "pass"}


TRIVIAL = str(WS / "a2_trivial.toml")


def test_trivial_pair(capsys):
    code, rep = machine(capsys, "check-torsion", TRIVIAL, "--trials", "3")
    assert code == 0 and rep["facts"]["tilting"] is True
    assert any("torsion-free class is zero" in w for w in rep["facts"]["warning"])
    code, rep = machine(capsys, "tilt", TRIVIAL, "--trials", "3")
    assert code == 0 and rep["facts"]["heart table equals module Hom table"] is True


def test_resolve_empty_complex(capsys):
    code, rep = machine(capsys, "resolve", A2, "empty")
    assert code == 0 and rep["witnesses"]["resolved"]["terms"] == {}


def test_corrupted_matrix_runs_no_suites(capsys, tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text((WS / "a2.toml").read_text().replace('"0" = [[[1]], []]', '"0" = [[[1, 0]], []]'))
    code, out, err = run(capsys, "verify", str(bad), "--suite", "all")
    assert code == 2 and out == "" and "complexes.torsion.differentials.0" in err


def test_exactness_comparison_suite_200_trials(capsys):
    code, rep = machine(capsys, "verify", A2, "--suite", "lemma21", "--seed", "7", "--trials", "200")
    assert code == 0 and rep["checks"][0]["trials"] == 200
