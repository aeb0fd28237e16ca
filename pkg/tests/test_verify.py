from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import leesdp.verify as verify
from leesdp.lee import Metric
from leesdp.oracle import brute_force_optimum
from leesdp.program import build_program
from leesdp.verify import (
    CapExceeded,
    check_block_coefficients,
    exact_psd,
    explicit_moment_matrix,
    feasibility_transfer,
    isotypical_orthogonality,
    orbit_average,
    psd_check,
    reduction_soundness,
    selfcheck,
)


@pytest.mark.parametrize("q,n", [(5, 1), (5, 2), (6, 2), (7, 1), (4, 2)])
@pytest.mark.parametrize("route", ["d1", "empty-integer"])
def test_block_coefficients_small(q, n, route):
    rep = check_block_coefficients(q, n, route)
    assert rep.ok, rep.text()
    assert rep.checked > 0


@pytest.mark.parametrize("q", [4, 6])
def test_cosine_route_rational(q):
    rep = check_block_coefficients(q, 2, "cosine")
    assert rep.ok, rep.text()


def test_cosine_route_q5_float():
    assert check_block_coefficients(5, 2, "cosine").ok


def test_corrupted_block_is_caught(monkeypatch):
    real = verify.build_blocks_D1

    def broken(*args):
        blocks = real(*args)
        e = blocks[0].entries[0][0]
        o = next(iter(e.coeffs))
        e.add_term(o, 1)
        return blocks

    monkeypatch.setattr(verify, "build_blocks_D1", broken)
    assert not check_block_coefficients(5, 2, "d1").ok


def test_isotypical_orthogonality():
    assert isotypical_orthogonality(5, 2).ok


def test_soundness_small():
    rep = reduction_soundness(5, 1, trials=20)
    assert rep.ok, rep.text()
    assert rep.checked >= 40


def test_soundness_catches_missing_block(monkeypatch):
    real = verify.build_blocks_D1
    monkeypatch.setattr(verify, "build_blocks_D1", lambda *a: real(*a)[-1:])
    rep = reduction_soundness(5, 2, trials=50)
    assert not rep.ok


def test_caps():
    with pytest.raises(CapExceeded):
        check_block_coefficients(7, 5)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10 ** 6))
def test_exact_psd_agrees_with_eigenvalues(k, seed):
    rng = np.random.default_rng(seed)
    B = rng.integers(-3, 4, size=(k, k + int(rng.integers(-1, 2)) or 1))
    M = B @ B.T
    if rng.random() < 0.5:
        M = M - int(rng.integers(0, 4)) * np.eye(k, dtype=np.int64)
    ev = np.linalg.eigvalsh(M.astype(float))[0]
    if abs(ev) > 1e-7:
        assert exact_psd(M.tolist()) == (ev > 0)
    assert psd_check(M) == exact_psd(M.tolist())


def test_exact_psd_rational_boundary():
    # rank one, PSD exactly; a tiny negative shift breaks it
    M = [[Fraction(1, 3), Fraction(1, 6)], [Fraction(1, 6), Fraction(1, 12)]]
    assert exact_psd(M)
    M[1][1] -= Fraction(1, 10 ** 30)
    assert not exact_psd(M)


def test_psd_check_rejects_asymmetric():
    with pytest.raises(ValueError):
        psd_check(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_code_moment_matrix_is_psd():
    q, n = 5, 2
    _, code = brute_force_optimum(q, n, 2, Metric.LEE)
    z = orbit_average(code, q)
    for d_size in (0, 1):
        M = explicit_moment_matrix(q, n, d_size, {o: float(v) for o, v in z.items()})
        assert np.linalg.eigvalsh(M)[0] > -1e-9


@pytest.mark.parametrize("q,n,d,metric", [(5, 2, 2, "lee"), (7, 2, 3, "lee"), (6, 2, 2, "lee-inf")])
def test_feasibility_transfer(q, n, d, metric):
    value, code = brute_force_optimum(q, n, d, metric)
    rep = feasibility_transfer(q, n, d, metric, code)
    assert rep.ok, rep.text()


def test_feasibility_transfer_rejects_bad_code():
    with pytest.raises(ValueError):
        feasibility_transfer(5, 1, 2, "lee", [(0,), (1,)])


def test_selfcheck_q6():
    reports = selfcheck(6, 2, trials=10)
    assert all(r.ok for r in reports), "\n".join(r.text() for r in reports)
    assert any("cosine" in r.name for r in reports)
