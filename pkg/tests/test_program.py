from fractions import Fraction

import numpy as np
import pytest

from leesdp.lee import Metric
from leesdp.program import (
    EmptyRoute,
    LinForm,
    Variant,
    build_blocks_Dempty,
    build_lp_b2,
    build_program,
    t_block,
)
from leesdp.symmetry import orbit_table, zero_orbit


def test_variables_are_feasible_orbits():
    p = build_program(5, 3, 2, Metric.LEE_INF)
    assert len(p.variables) == 48
    assert all(o.d_inf >= 2 for o in p.variables)
    b2 = build_lp_b2(5, 3, 2, Metric.LEE_INF)
    assert all(o.size <= 2 for o in b2.variables)
    assert len(b2.variables) == len(orbit_table(5, 3, 2).feasible(2, Metric.LEE_INF))


@pytest.mark.parametrize("q,n,d,metric", [(5, 2, 2, "lee"), (6, 2, 3, "lee"), (7, 2, 2, "lee-inf")])
def test_blocks_symmetric_and_integral(q, n, d, metric):
    p = build_program(q, n, d, metric)
    for b in p.blocks:
        assert b.is_symmetric()
        assert all(e.is_integral() for row in b.entries for e in row)
        assert b.variables() <= set(p.variables)


def test_default_routes():
    assert build_program(5, 2, 2).route is EmptyRoute.INTEGER
    assert build_lp_b2(5, 2, 2).route is EmptyRoute.COSINE
    assert build_program(5, 2, 2, variant="b2", route="integer").route is EmptyRoute.INTEGER


def test_t_block_shape():
    T = t_block(5, 2, 2, Metric.LEE)
    z0 = zero_orbit(2)
    assert T.dim == 2
    assert T.entries[0][0].constant == 1 and not T.entries[0][0].coeffs
    assert T.entries[0][1].coeffs == {z0: 25}
    # p for the invariant vector: coefficient of the zero orbit is q^n
    assert T.entries[1][1].coeffs[z0] == 25


def test_objective_counts_words():
    p = build_program(5, 1, 1)
    z = {o: Fraction(0) for o in p.variables}
    z[zero_orbit(1)] = Fraction(1, 5)
    assert p.objective_value(z) == 1


def test_trivial_distance_one_program_value():
    # all words at distance >= 1: the full space is a code, value q^n is feasible
    p = build_program(5, 1, 1)
    z = {o: Fraction(1) for o in p.variables}
    assert p.objective_value(z) == 5
    for M in p.evaluate(z):
        assert np.linalg.eigvalsh(M).min() > -1e-9


def test_cosine_route_blocks_are_scalars():
    blocks = build_blocks_Dempty(5, 2, 2, Metric.LEE, EmptyRoute.COSINE)
    assert blocks[-1].label == "T"
    assert all(b.dim == 1 for b in blocks[:-1])


def test_summary_fields():
    p = build_program(5, 2, 2, "lee-inf")
    s = p.summary()
    assert s["num_vars"] == 9 and s["objective_scale"] == 25
    assert p.summary(scale=True)["objective_scale"] == 1
    assert {b["label"] for b in s["blocks"]} >= {"T"}


def test_linform_helpers():
    z0 = zero_orbit(1)
    f = LinForm()
    f.add_term(z0, 2)
    f.add_term(z0, -2)
    assert f.is_zero()
    f.add_term(z0, Fraction(1, 2))
    assert not f.is_integral()
    assert f.evaluate({z0: 4}) == 2


def test_bad_parameters():
    with pytest.raises(ValueError):
        build_program(1, 2, 2)
    with pytest.raises(ValueError):
        Variant.parse("b4")
