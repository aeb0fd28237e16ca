from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from leesdp.repsets import (
    Route,
    compositions,
    cosine_forms,
    enumerate_bishapes,
    expand_p_n,
    pair_forms,
    representative_data,
    tableau_pairs,
)
from leesdp.symmetry import pi_of


def perm_matrix(f, q):
    P = np.zeros((q, q))
    for x in range(q):
        P[f(x), x] = 1
    return P


def commutant_dim(gens, q):
    """dim of {A : A P = P A for all generators}, by a nullspace computation."""
    rows = []
    for P in gens:
        # vec(AP - PA) = (P^T ⊗ I - I ⊗ P) vec(A)
        rows.append(np.kron(P.T, np.eye(q)) - np.kron(np.eye(q), P))
    M = np.vstack(rows)
    return q * q - np.linalg.matrix_rank(M)


def orbits_on_pairs(q, maps):
    seen, count = set(), 0
    for a, b in product(range(q), repeat=2):
        if (a, b) in seen:
            continue
        count += 1
        todo = [(a, b)]
        while todo:
            x = todo.pop()
            if x in seen:
                continue
            seen.add(x)
            todo.extend((f(x[0]), f(x[1])) for f in maps)
    return count


@pytest.mark.parametrize("q", range(2, 13))
def test_reflection_centralizer_identity(q):
    rep = representative_data(q)
    lhs = rep.m1 ** 2 + rep.m2 ** 2
    assert lhs == (q * q // 2 + 2 if q % 2 == 0 else (q * q + 1) // 2)
    refl = lambda x: (-x) % q
    assert lhs == orbits_on_pairs(q, [refl])
    assert lhs == commutant_dim([perm_matrix(refl, q)], q)
    assert (rep.m1, rep.m2) == (q // 2 + 1, (q - 1) // 2)


@pytest.mark.parametrize("q", range(2, 13))
def test_dihedral_multiplicity_free(q):
    rep = representative_data(q)
    rot = lambda x: (x + 1) % q
    refl = lambda x: (-x) % q
    dim = commutant_dim([perm_matrix(rot, q), perm_matrix(refl, q)], q)
    # multiplicity free: sum of 1^2 over the irreducibles
    assert dim == rep.s == q // 2 + 1 == orbits_on_pairs(q, [rot, refl])


@pytest.mark.parametrize("q", range(2, 13))
def test_representative_vectors(q):
    rep = representative_data(q)
    R = perm_matrix(lambda x: (-x) % q, q)
    # B1 columns are reflection-invariant, B2 columns anti-invariant
    assert np.array_equal(R @ rep.B1, rep.B1)
    assert np.array_equal(R @ rep.B2, -rep.B2)
    assert np.linalg.matrix_rank(np.hstack([rep.B1, rep.B2])) == q
    # cosine vectors: pairwise orthogonal, and C^T A C diagonal for a dihedral-invariant A
    C = rep.C
    G = C.T @ C
    assert np.allclose(G - np.diag(np.diag(G)), 0)
    A = np.array([[min((a - b) % q, (b - a) % q) ** 2 for b in range(q)] for a in range(q)], float)
    D = C.T @ A @ C
    assert np.allclose(D - np.diag(np.diag(D)), 0, atol=1e-9)


@pytest.mark.parametrize("q", [5, 6, 7])
@pytest.mark.parametrize("route", list(Route))
def test_pair_forms_match_tensor_pairing(q, route):
    rep = representative_data(q)
    forms = pair_forms(q, route)
    for (i, j, h), form in forms.items():
        B = rep.B(i)
        ref = {}
        for a, b in product(range(q), repeat=2):
            v = int(B[a, j - 1] * B[b, h - 1])
            if not v:
                continue
            t = (0, a, b) if route is Route.D_CASE else (a, a, b)
            c = pi_of(t, q)
            ref[c] = ref.get(c, 0) + v
        assert form == {c: v for c, v in ref.items() if v}


@pytest.mark.parametrize("q", [2, 3, 4, 6])
def test_cosine_forms_rational_cases(q):
    for form in cosine_forms(q):
        assert all(isinstance(v, int) for v in form.values())


def test_cosine_forms_irrational_q5():
    assert any(isinstance(v, float) for f in cosine_forms(5) for v in f.values())


def test_compositions():
    comps = list(compositions(3, 3))
    assert len(comps) == 10 and len(set(comps)) == 10
    assert all(sum(c) == 3 for c in comps)


@pytest.mark.parametrize("q,n", [(5, 2), (6, 2), (7, 1), (4, 3)])
def test_p_n_invariant_vector_counts_pairs(q, n):
    # coefficient of a monomial = number of ordered word pairs with those coordinate distances
    ref = {}
    for u in product(range(q), repeat=n):
        for v in product(range(q), repeat=n):
            mono = tuple(sorted((0, 0, min((a - b) % q, (b - a) % q)) for a, b in zip(u, v)))
            ref[mono] = ref.get(mono, 0) + 1
    poly = expand_p_n(q, (n,) + (0,) * (q // 2))
    assert {tuple(sorted(k)): v for k, v in poly.items()} == ref


def test_every_bishape_has_rows():
    for q, n in [(5, 2), (6, 3), (7, 2)]:
        for bs in enumerate_bishapes(q, n):
            assert tableau_pairs(q, bs)
