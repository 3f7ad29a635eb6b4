import json
import subprocess
import sys

import pytest

from hf_frege import abstraction, cli, model
from hf_frege.errors import InvariantViolation


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)


def test_extension_json(capsys):
    got = run_json(capsys, "extension", "--universe", "v3", "--formula", "x = x")
    expected = abstraction.extension_of(model.v_stage(3), "x = x").to_json()
    assert {k: got[k] for k in expected} == expected
    assert got["extension"] == ["#0", "#1", "#2", "#3"]


def test_enumerate_is_stable(capsys):
    a = run(capsys, "enumerate", "--from", "0", "--count", "5")
    b = run(capsys, "enumerate", "--from", "0", "--count", "5")
    assert a == b
    got = run_json(capsys, "enumerate", "--from", "0", "--count", "5")
    assert [f["formula"] for f in got["formulas"]] == ["x in x", "x in $p", "$p in x", "$p in $p", "x = x"]
    assert got["order"] == "core-v1"


def test_diagonal(capsys):
    got = run_json(capsys, "diagonal", "--T", "x in y")
    assert got["value_T"] is False and got["value_R"] is True
    assert got["R"] == "not x in x"


def test_escape(capsys):
    got = run_json(capsys, "escape", "--universe", "ack:8")
    assert got["escaped"] is True
    assert got["kind"] == "extension"


@pytest.mark.parametrize("argv", [
    ("eval", "--formula", "ex y y in x", "--bind", "x={{}}"),
    ("eval", "--formula", "eps[x | x = x] = eps[x | not not x = x]"),
    ("number", "--formula", "x in $p", "--bind", "$p=#3"),
    ("scott", "--set", "{#0,#1}"),
    ("abstract", "--universe", "v2", "--formula", "a = b"),
    ("eliminate", "--formula", "y in eps[x | x in $p]", "--bind", "p=#3", "--bind", "y=#0", "--check"),
    ("eliminate", "--mode", "uniform", "--formula", "y = eps[x | x in $p]"),
    ("blv-check", "--universe", "v2", "--count", "6"),
    ("code", "--formula", "ex y y in x"),
    ("decode", "--hf", "{#2,{#1,{{{{{#0,#1,#3,#11,#2059,{#0,#1,#3,#11,#2059}}},{#0,{#0,#1,#3,#11,#2059,{#0,#1,#3,#11,#2059}}}}}}}}"),
])
def test_commands_text_and_json_agree(capsys, argv):
    code, text, err = run(capsys, *argv)
    assert code == 0, err
    payload = run_json(capsys, *argv)
    lines = cli._text(payload)
    assert text == "\n".join(lines) + "\n"


def test_code_decode_round_trip(capsys):
    coded = run_json(capsys, "code", "--formula", "all y (y in x -> y = $p)")
    decoded = run_json(capsys, "decode", "--hf", coded["code"])
    assert decoded["index"] == coded["index"]
    assert decoded["formula"] == coded["formula"]


def test_decode_rejects_non_codes(capsys):
    assert run(capsys, "decode", "--hf", "#5")[0] == 2


def test_eval_values(capsys):
    assert run_json(capsys, "eval", "--universe", "v3", "--formula", "all x x in p", "--bind", "p={}")["value"] is False


def test_user_errors(capsys):
    assert run(capsys, "eval", "--formula", "x in")[0] == 2
    assert run(capsys, "eval", "--universe", "v9", "--formula", "x = x")[0] == 2
    assert run(capsys, "eval", "--formula", "x in y", "--bind", "x=#0")[0] == 2
    assert run(capsys, "abstract", "--formula", "a in b")[0] == 2
    code, _, err = run(capsys, "extension")
    assert code == 2 and "--formula" in err


def test_budget_errors(capsys, monkeypatch):
    hard = "x = #1 or x = #2"
    assert run(capsys, "extension", "--formula", hard, "--budget", "10")[0] == 3
    monkeypatch.setenv(cli.BUDGET_ENV, "10")
    assert run(capsys, "extension", "--formula", hard)[0] == 3
    assert run(capsys, "extension", "--formula", hard, "--budget", "50000")[0] == 0
    monkeypatch.setenv(cli.BUDGET_ENV, "lots")
    assert run(capsys, "extension", "--formula", hard)[0] == 2


def test_invariant_violation_exit_code(capsys, monkeypatch):
    def broken(*args, **kwargs):
        raise InvariantViolation("simulated")
    monkeypatch.setattr(cli.diagonal, "russell_escape", broken)
    assert run(capsys, "escape")[0] == 4


def test_suite_subset(capsys):
    code, out, _ = run(capsys, "suite", "--only", "3,8")
    assert code == 0
    assert out.count("[PASS]") == 2


def test_version():
    out = subprocess.run([sys.executable, "-m", "hf_frege.cli", "--version"], capture_output=True, text=True)
    assert "core-v1" in out.stdout


def test_byte_identical_across_processes():
    argv = [sys.executable, "-m", "hf_frege.cli", "number", "--formula", "x in $p", "--bind", "p=#3", "--json"]
    a = subprocess.run(argv, capture_output=True)
    b = subprocess.run(argv, capture_output=True)
    assert a.returncode == 0
    assert a.stdout == b.stdout
