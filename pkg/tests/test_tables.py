import math

import pytest

from leesdp.lee import Metric
from leesdp.tables import Cell, evaluate_cell, load_expected, report, run_table, select


def test_expected_file_complete():
    cells = load_expected()
    t2 = [c for c in cells if c.table == "table2"]
    t1 = [c for c in cells if c.table == "table1"]
    assert len(t2) == 45 and len(t1) == 47
    assert {c.kind for c in t2} == {"vars", "b2", "b3"}
    assert all(c.metric is Metric.LEE for c in t1)


def test_b2_row_is_root_five_power():
    for c in select("table2", kinds=["b2"]):
        if c.q == 5:
            assert c.expected == pytest.approx(round(math.sqrt(5) ** c.n, 3))


def test_parse_custom_text():
    cells = load_expected("# comment\ntable1 floor 5 4 4 lee 27  # trailing\n")
    assert cells == [Cell("table1", "floor", 5, 4, 4, Metric.LEE, 27.0)]


def test_vars_cells_without_solver():
    res = {r.cell.name(): r for r in run_table("table2", max_n=2, kinds=["vars"])}
    assert res["vars(5,2,2,lee-inf)"].status == "match"
    assert res["vars(7,2,3,lee-inf)"].status == "match"


def test_solved_cells_skip_without_solver():
    r = evaluate_cell(select("table1")[0], solver=None)
    assert r.status == "skipped"
    assert "summary: skipped=1" in report([r])


def test_unknown_table():
    with pytest.raises(ValueError):
        select("table3")


def test_table1_cell_with_solver(solver_cmd):
    cell = next(c for c in select("table1") if (c.q, c.n, c.d) == (5, 4, 4))
    r = evaluate_cell(cell, solver_cmd)
    assert r.status == "match" and r.got == 27


def test_table2_small_cells_with_solver(solver_cmd):
    results = run_table("table2", solver_cmd, max_n=2, kinds=["b2", "b3"], jobs=2)
    assert all(r.status == "match" for r in results), report(results)
