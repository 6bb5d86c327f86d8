from __future__ import annotations

import json
import subprocess
import sys

import pytest

from deontasp.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from deontasp.corpus.runner import corpus_path

SPECS = corpus_path() / "specs"


@pytest.fixture
def write(tmp_path):
    def _write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def test_solve_prints_answer_sets_and_costs(write, capsys):
    prog = write("p.lp", "a v b. :~ a. [1:2]")
    assert main(["solve", prog]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out == ["Answer 1: {b}", "Cost: []", "1 optimal answer sets"]


def test_solve_all_ignores_weak_constraints(write, capsys):
    prog = write("p.lp", "a v b. :~ a. [1:2]")
    assert main(["solve", "--all", prog]) == EXIT_OK
    out = capsys.readouterr().out
    assert "{a}" in out and "{b}" in out and "2 answer sets" in out


def test_solve_concatenates_files(write, capsys):
    from deontasp.deontic import CORE_RULES

    core = write("core.lp", CORE_RULES)
    act = write("act.lp", "act(a).")
    assert main(["solve", "--all", core, act]) == EXIT_OK
    assert "4 answer sets" in capsys.readouterr().out


def test_structured_output(write, capsys):
    prog = write("p.lp", "a. :~ a. [2:3]")
    assert main(["solve", "--format", "structured", prog]) == EXIT_OK
    (line,) = capsys.readouterr().out.splitlines()
    assert json.loads(line) == {"model": 1, "literals": ["a"], "cost": {"3": 2}}


def test_max_models(write, capsys):
    prog = write("p.lp", "a v b v c.")
    assert main(["solve", "--all", "--max-models", "2", prog]) == EXIT_OK
    assert "2 answer sets" in capsys.readouterr().out


def test_inconsistent_program_exits_one(write, capsys):
    assert main(["solve", write("p.lp", "a. -a.")]) == EXIT_FAIL
    assert "INCONSISTENT" in capsys.readouterr().err


def test_parse_error_exits_two_with_position(write, capsys):
    assert main(["solve", write("p.lp", "a :- .")]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "p.lp" in err and "1" in err


def test_missing_file_exits_two(capsys):
    assert main(["solve", "/nonexistent.lp"]) == EXIT_USAGE
    assert "cannot read" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [[], ["solve"], ["frobnicate"], ["pacman", "--games", "0"], ["solve", "--all", "--optimal", "x"]])
def test_usage_errors_exit_two(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_USAGE


def test_compile_prints_the_program(capsys):
    assert main(["compile", str(SPECS / "plato.yaml")]) == EXIT_OK
    out = capsys.readouterr().out
    assert ":~ -O(help), Happens(emergency). [1:3]" in out
    assert "act(X)" not in out
    assert main(["compile", "--with-core", str(SPECS / "plato.yaml")]) == EXIT_OK
    assert capsys.readouterr().out.startswith("O(X) v -O(X) :- act(X).")


def test_compile_levels(capsys):
    assert main(["compile", "--levels", str(SPECS / "driving.yaml")]) == EXIT_OK
    rows = [line.split("\t") for line in capsys.readouterr().out.splitlines()]
    assert dict(rows) == {"O1": "3", "O2": "2", "O3": "4", "O4": "2", "O5": "2", "O6": "2", "O7": "2", "O8": "3"}
    assert rows[0] == ["O3", "4"]


def test_compile_schema_error_exits_two(write, capsys):
    assert main(["compile", write("bad.yaml", "norms: 3")]) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_corpus_runs_and_filters(capsys):
    assert main(["corpus", "--filter", "fence"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "4/4 entries passed" in out
    assert main(["corpus", "--filter", "nothing-here"]) == EXIT_USAGE


def test_corpus_from_specs(capsys):
    assert main(["corpus", "--source", "spec"]) == EXIT_OK
    assert "FAIL" not in capsys.readouterr().out


def test_pacman_runs_a_game(capsys):
    assert main(["pacman", "--base", "weak-vegan", "--games", "1", "--seed", "2", "--trace"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert any(line.startswith("game seed=") for line in lines)
    summary = json.loads(lines[-1])
    assert summary["base"] == "weak_vegan" and summary["games"] == 1


def test_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "deontasp.cli", "--version"], capture_output=True, text=True, check=False
    )
    assert result.returncode == 0
    assert result.stdout.startswith("deontasp ")
