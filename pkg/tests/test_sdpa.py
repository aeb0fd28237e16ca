import math
from pathlib import Path

import numpy as np
import pytest

from leesdp.program import build_program
from leesdp.sdpa import (
    EmissionError,
    SolverFailure,
    SolverOutputError,
    emit_sdpa,
    parse_solution_and_floor,
    read_sdpa,
    run_solver,
)
from leesdp.symmetry import zero_orbit

GOLDEN = Path(__file__).parent / "data" / "b3_q5_n2_d2_lee-inf.dat-s"


def test_emission_is_deterministic_and_matches_golden():
    a = emit_sdpa(build_program(5, 2, 2, "lee-inf"))
    b = emit_sdpa(build_program(5, 2, 2, "lee-inf"))
    assert a == b
    assert a == GOLDEN.read_text()


def rebuild(data, x):
    """Blocks of sum_i x_i F_i - F_0 from the parsed file."""
    mats = [np.zeros((d, d)) for d in data.block_dims()]
    for (m, b), entries in data.entries.items():
        coef = -1.0 if m == 0 else x[m - 1]
        for (i, j), v in entries.items():
            mats[b - 1][i - 1, j - 1] += coef * v
            if i != j:
                mats[b - 1][j - 1, i - 1] += coef * v
    return mats


@pytest.mark.parametrize("scale", [False, True])
@pytest.mark.parametrize("args", [(5, 2, 2, "lee-inf"), (6, 2, 3, "lee"), (7, 1, 2, "lee")])
def test_round_trip(args, scale):
    p = build_program(*args)
    data = read_sdpa(emit_sdpa(p, scale))
    assert data.m == len(p.variables)
    rng = np.random.default_rng(1)
    x = rng.normal(size=data.m)
    z = dict(zip(p.variables, x))
    want = p.evaluate(z)
    got = rebuild(data, x)
    full = [M for M in want if M.shape[0] > 1]
    diag = np.array([M[0, 0] for M in want if M.shape[0] == 1])
    qn = p.q ** p.n
    for W, G, b in zip(full, got, [b for b in p.blocks if b.dim > 1]):
        if scale and b.label == "T":
            W = W / np.array([[1, qn], [qn, qn * qn]])
        assert np.allclose(W, G)
    assert np.allclose(np.diag(got[-1]), diag)
    # c = -objective
    obj = -p.objective_value(z) / (qn if scale else 1)
    assert float(np.dot(data.c, x)) == pytest.approx(obj)


def test_header_and_negative_diag_block():
    text = emit_sdpa(build_program(5, 2, 2, "lee-inf"))
    lines = text.splitlines()
    assert lines[0].startswith('"') and lines[1].startswith('"')
    struct = [int(t) for t in lines[4].split()]
    assert struct[-1] < 0 and all(s > 0 for s in struct[:-1])


def test_non_finite_rejected():
    p = build_program(5, 1, 2)
    p.blocks[0].entries[0][0].add_term(zero_orbit(1), math.inf)
    with pytest.raises(EmissionError):
        emit_sdpa(p)


SDPA_OUT = """
phase.value = pdOPT
   Iteration = 12
objValPrimal = -1.0260455000e+01
objValDual   = -1.0260455100e+01
"""


def test_parse_sdpa_output():
    r = parse_solution_and_floor(SDPA_OUT)
    assert r.bound == 10 and r.verified and r.phase == "pdOPT"
    assert r.raw == pytest.approx(10.2604551)


def test_parse_floor_tolerance():
    out = "objValPrimal = -9.9999999e+00\nobjValDual = -1.0000000e+01\n"
    assert parse_solution_and_floor(out).bound == 10
    out = "objValPrimal = -9.9990e+00\nobjValDual = -9.9990e+00\n"
    assert parse_solution_and_floor(out).bound == 9


def test_parse_scaled_and_gap():
    out = "phase.value = pFEAS\nobjValPrimal = -0.4\nobjValDual = -0.5\n"
    r = parse_solution_and_floor(out, scale=25)
    assert r.raw == pytest.approx(12.5) and not r.verified


def test_parse_unverified_phase():
    out = "phase.value = pUNBD\nobjValPrimal = -3\nobjValDual = -3\n"
    assert not parse_solution_and_floor(out).verified


def test_parse_csdp():
    out = "Success: SDP solved\nPrimal objective value: -1.0000000e+01\nDual objective value: -1.0000001e+01\n"
    r = parse_solution_and_floor(out, flavor="csdp")
    assert r.bound == 10


def test_parse_garbage():
    with pytest.raises(SolverOutputError):
        parse_solution_and_floor("nothing here")
    with pytest.raises(ValueError):
        parse_solution_and_floor(SDPA_OUT, flavor="mosek")


def test_missing_solver(monkeypatch):
    monkeypatch.delenv("LEESDP_SOLVER", raising=False)
    with pytest.raises(SolverFailure):
        run_solver(build_program(5, 1, 2))
    with pytest.raises(SolverFailure):
        run_solver(build_program(5, 1, 2), "/definitely/not/here")


def test_run_solver_with_fake_binary(tmp_path):
    fake = tmp_path / "fake_solver.py"
    fake.write_text("import sys\nopen(sys.argv[2], 'w').write('phase.value = pdOPT\\nobjValPrimal = -2.0\\nobjValDual = -2.0\\n')\n")
    import sys
    r = run_solver(build_program(5, 1, 2), f"{sys.executable} {fake}")
    assert r.bound == 2 and r.verified


def test_real_solver_small(solver_cmd):
    r = run_solver(build_program(5, 1, 2, "lee-inf"), solver_cmd)
    assert r.bound == 2 and r.verified
