import json
import sys

import pytest

from leesdp.cli import EXIT_OK, EXIT_SOLVER, EXIT_USAGE, EXIT_VERIFY, UsageError, choose_route, main
from leesdp.program import EmptyRoute, Variant
from leesdp.sdpa import read_sdpa


def test_generate_writes_files(tmp_path, capsys):
    stem = tmp_path / "prog"
    assert main(["generate", "--q", "5", "--n", "3", "--d", "2", "--metric", "lee-inf",
                 "--bound", "b3", "-o", str(stem)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "variables: 48" in out
    summary = json.loads((tmp_path / "prog.json").read_text())
    assert summary["num_vars"] == 48
    data = read_sdpa((tmp_path / "prog.dat-s").read_text())
    assert data.m == 48


def test_generate_is_deterministic(tmp_path):
    for name in ("a", "b"):
        main(["generate", "--q", "6", "--n", "2", "--d", "3", "-o", str(tmp_path / name)])
    assert (tmp_path / "a.dat-s").read_text() == (tmp_path / "b.dat-s").read_text()


def test_route_rule():
    assert choose_route(5, Variant.B3, None) is EmptyRoute.INTEGER
    assert choose_route(5, Variant.B2, None) is EmptyRoute.INTEGER
    assert choose_route(6, Variant.B2, None) is EmptyRoute.COSINE
    assert choose_route(6, Variant.B3, "cosine") is EmptyRoute.COSINE
    assert choose_route(7, Variant.B3, "cosine", force_cosine=True) is EmptyRoute.COSINE
    with pytest.raises(UsageError):
        choose_route(7, Variant.B3, "cosine")


def test_usage_errors(tmp_path, capsys):
    assert main(["generate", "--q", "5", "--n", "2", "--d", "2", "--route", "cosine",
                 "-o", str(tmp_path / "x")]) == EXIT_USAGE
    assert main(["generate", "--q", "1", "--n", "2", "--d", "2", "-o", str(tmp_path / "x")]) == EXIT_USAGE
    assert main(["oracle", "--q", "7", "--n", "5", "--d", "3"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--q", "5"])
    assert exc.value.code == EXIT_USAGE


def test_oracle_command(capsys):
    assert main(["oracle", "--q", "5", "--n", "3", "--d", "2", "--metric", "lee-inf"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "optimum: 10" in out and "witness:" in out


def test_selfcheck_command(capsys):
    assert main(["selfcheck", "--q", "5", "--n", "2", "--trials", "14"]) == EXIT_OK
    assert "PASS" in capsys.readouterr().out


def test_selfcheck_failure_exit(monkeypatch, capsys):
    import leesdp.verify as verify
    real = verify.build_blocks_D1
    monkeypatch.setattr(verify, "build_blocks_D1", lambda *a: real(*a)[:-1])
    assert main(["selfcheck", "--q", "5", "--n", "1", "--trials", "7"]) == EXIT_VERIFY


def test_dump_orbits(tmp_path, capsys):
    out = tmp_path / "orbits.tsv"
    assert main(["dump-orbits", "--q", "5", "--n", "2", "-o", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert len(lines) > 9 and lines[0].startswith("00\t1\t")


def test_bound_without_solver(monkeypatch, capsys):
    monkeypatch.delenv("LEESDP_SOLVER", raising=False)
    assert main(["bound", "--q", "5", "--n", "1", "--d", "2"]) == EXIT_SOLVER
    assert main(["bound", "--q", "5", "--n", "1", "--d", "2", "--solver", "/no/such/solver"]) == EXIT_SOLVER


def test_bound_with_env_solver(monkeypatch, capsys, solver_cmd):
    monkeypatch.setenv("LEESDP_SOLVER", solver_cmd)
    assert main(["bound", "--q", "7", "--n", "2", "--d", "2", "--metric", "lee-inf"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "raw=10.260" in out and out.strip().endswith("10")


def test_table_vars_only(capsys, monkeypatch):
    monkeypatch.delenv("LEESDP_SOLVER", raising=False)
    code = main(["table", "table2", "--kinds", "vars", "--max-n", "2"])
    out = capsys.readouterr().out
    assert "vars(5,2,2,lee-inf)" in out
    # the single-coordinate C_7 cell differs from the published value, so the run reports it
    assert "mismatch" in out and code == EXIT_VERIFY
