from __future__ import annotations

import io
import subprocess
import sys

import pytest

from conftest import FIXTURES
from regen_golden import COMMANDS, golden_path, invoke
from tableau_kb.cli import run
from tableau_kb.dlsyntax import parse_dl

FIXTURE_NAMES = sorted(p.name for p in FIXTURES.glob("*.dl"))


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("fixture", FIXTURE_NAMES)
@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_golden_output(fixture, name):
    code, out, _ = invoke(fixture, name)
    assert f"exit {code}\n{out}" == golden_path(fixture, name).read_text(encoding="utf-8")


def test_walkthrough_check():
    assert cli("check", FIXTURES / "actors.dl") == (0, "consistent\n", "")


def test_inconsistent_kb_exits_one(tmp_path):
    p = tmp_path / "bad.dl"
    p.write_text("a : A AND NOT A.\n", encoding="utf-8")
    code, out, _ = cli("check", p)
    assert code == 1
    assert out == "inconsistent\nclash:atomic 0 A\n"


def test_entails_flag():
    award = FIXTURES / "award.dl"
    assert cli("check", award, "--entails", "a : AwardWinnerActor.")[:2] == (0, "entailed\n")
    assert cli("check", award, "--entails", "b : AwardWinnerActor.")[:2] == (1, "not entailed\n")


def test_bad_entails_argument():
    code, _, err = cli("check", FIXTURES / "award.dl", "--entails", "a : .")
    assert code == 2
    assert err.startswith("--entails:")


def test_strict_rules_rejects_award_rule():
    code, out, err = cli("materialize", FIXTURES / "award.dl", "--strict-rules")
    assert code == 2
    assert out == ""
    assert "?x" in err


def test_syntax_error_points_at_file_line_column(tmp_path):
    p = tmp_path / "broken.dl"
    p.write_text("a : A.\nA SUBCLASS .\n", encoding="utf-8")
    code, _, err = cli("check", p)
    assert code == 2
    assert err.startswith(f"{p}:2:12: error:")


def test_turtle_error_points_at_file_line_column(tmp_path):
    p = tmp_path / "broken.ttl"
    p.write_text("@prefix : <http://e/> .\n:a :r .\n", encoding="utf-8")
    code, _, err = cli("check", p)
    assert code == 2
    assert err.startswith(f"{p}:2:7: error:")


def test_missing_file(tmp_path):
    code, _, err = cli("check", tmp_path / "nope.dl")
    assert code == 2
    assert "nope.dl" in err


def test_unknown_extension_needs_format(tmp_path):
    p = tmp_path / "kb.txt"
    p.write_text("a : A.\n", encoding="utf-8")
    assert cli("check", p)[0] == 2
    assert cli("check", p, "--format", "dl")[0] == 0


def test_usage_error_exits_two():
    assert cli("frobnicate")[0] == 2


def test_node_cap_exits_three(tmp_path, monkeypatch):
    p = tmp_path / "kb.dl"
    p.write_text("a : r SOME A.\n", encoding="utf-8")
    assert cli("check", p, "--max-nodes", "1")[0] == 3
    monkeypatch.setenv("TABLEAUKB_MAX_NODES", "1")
    assert cli("check", p)[0] == 3
    monkeypatch.setenv("TABLEAUKB_MAX_NODES", "many")
    assert cli("check", p)[0] == 2


def test_zero_timeout_exits_three():
    code, _, err = cli("materialize", FIXTURES / "series.dl", "--timeout", "0")
    assert code == 3
    assert "incomplete" in err


def test_non_regular_rbox_is_an_input_error(tmp_path):
    p = tmp_path / "kb.dl"
    p.write_text("r o s SUBROLE r. s o r SUBROLE s.\n", encoding="utf-8")
    assert cli("check", p)[0] == 2
    code, out, _ = cli("validate", p)
    assert (code, out) == (2, "invalid\n")


def test_oracle_without_model(tmp_path):
    p = tmp_path / "kb.dl"
    p.write_text("a DIFF b. b DIFF c. a DIFF c.\n", encoding="utf-8")
    assert cli("oracle", p, "--oracle-bound", "2") == (1, "no model with at most 2 elements\n", "")


def test_oracle_budget_exits_three(tmp_path):
    p = tmp_path / "kb.dl"
    p.write_text("a : MIN 3 r A. A SUBCLASS MIN 3 r (NOT A). NOT A SUBCLASS MIN 3 r A.\n", encoding="utf-8")
    assert cli("oracle", p, "--oracle-bound", "6", "--budget", "5")[0] == 3


def test_convert_round_trip_through_files(tmp_path):
    for name in FIXTURE_NAMES:
        ttl, back = tmp_path / (name + ".ttl"), tmp_path / (name + ".back.dl")
        assert cli("convert", FIXTURES / name, "-o", ttl)[0] == 0
        assert cli("convert", ttl, "-o", back)[0] == 0
        original = parse_dl((FIXTURES / name).read_text(encoding="utf-8"))
        assert parse_dl(back.read_text(encoding="utf-8")).axioms == original.axioms


def test_convert_warns_about_rules():
    code, _, err = cli("convert", FIXTURES / "award.dl", "--to", "ttl")
    assert code == 0
    assert "1 rule(s)" in err


def test_classify_turtle_output(tmp_path):
    p = tmp_path / "kb.dl"
    p.write_text("liveAction SUBCLASS Movie. Narrator EQUIV Lector.\n", encoding="utf-8")
    code, out, _ = cli("classify", p, "--output", "ttl")
    assert code == 0
    assert ":liveAction rdfs:subClassOf :Movie ." in out


def test_series_notes_possible_incompleteness():
    _, _, err = cli("check", FIXTURES / "series.dl")
    assert err.count("possibly incomplete") == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tableau_kb.cli", "check", str(FIXTURES / "actors.dl")],
        capture_output=True,
        text=True,
    )
    assert (proc.returncode, proc.stdout) == (0, "consistent\n")
