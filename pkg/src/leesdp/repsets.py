"""Representative sets and the symbolic expansion of reduced block entries.

Two group actions are used. The reflection action of S_2 on C^{Z_q} (the
stabilizer of the zero word in D_q) has representative set {B1, B2}; taking
tensor powers gives a representative set indexed by bishapes for
S_2^n ⋊ S_n. The full dihedral action D_q has the one-column representative
set {C_1, ..., C_s} of cosine vectors.

Block entries are polynomials in "pair variables" ``B_i(j) ⊗ B_i(h)``. Each
pair variable is a linear form in the dual basis of invariant 2-tensors,
labelled by dihedral column classes, so the entry becomes a polynomial whose
monomials are multisets of ``n`` column classes (:data:`Monomial`).
"""

from __future__ import annotations

import enum
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .symmetry import Column, pi_of
from .tableaux import (
    Partition,
    Tableau,
    column_stabilizer,
    is_semistandard,
    partitions,
    row_rearrangements,
    semistandard_tableaux,
)

Monomial = tuple[Column, ...]
# one factor of a pair-variable monomial: (factor index 1|2, j, h), 1-based columns
PairVar = tuple[int, int, int]


class Route(enum.Enum):
    D_CASE = "d1"
    EMPTY_INTEGER = "empty-integer"


@dataclass(frozen=True)
class RepresentativeData:
    q: int
    m1: int
    m2: int
    s: int
    B1: np.ndarray
    B2: np.ndarray
    C: np.ndarray

    def B(self, i: int) -> np.ndarray:
        return self.B1 if i == 1 else self.B2

    def m(self, i: int) -> int:
        return self.m1 if i == 1 else self.m2


@lru_cache(maxsize=None)
def representative_data(q: int) -> RepresentativeData:
    if q < 2:
        raise ValueError("q must be at least 2")
    m1 = q // 2 + 1
    m2 = (q - 1) // 2
    s = q // 2 + 1
    B1 = np.zeros((q, m1), dtype=np.int64)
    B1[0, 0] = 1
    for i in range(1, q // 2 + 1):
        B1[i, i] += 1
        B1[q - i, i] += 1
    B2 = np.zeros((q, m2), dtype=np.int64)
    for i in range(1, m2 + 1):
        B2[i, i - 1] = 1
        B2[q - i, i - 1] = -1
    C = np.zeros((q, s))
    t = np.arange(q)
    for j in range(s):
        dim = 1 if j == 0 or 2 * j == q else 2
        C[:, j] = math.sqrt(dim) * np.cos(2 * math.pi * j * t / q)
    for M in (B1, B2, C):
        M.setflags(write=False)
    return RepresentativeData(q, m1, m2, s, B1, B2, C)


@dataclass(frozen=True, order=True)
class BiShape:
    lambda1: Partition
    lambda2: Partition

    @property
    def n1(self) -> int:
        return sum(self.lambda1)

    @property
    def n2(self) -> int:
        return sum(self.lambda2)

    @property
    def label(self) -> str:
        def part(p):
            return "(" + ",".join(map(str, p)) + ")"
        return f"{part(self.lambda1)}|{part(self.lambda2)}"


TableauPair = tuple[Tableau, Tableau]


def enumerate_bishapes(q: int, n: int) -> list[BiShape]:
    """Bishapes (lambda1 ⊢ n1, lambda2 ⊢ n2) with nonempty W_lambda, n1 descending."""
    rep = representative_data(q)
    out = []
    for n1 in range(n, -1, -1):
        for l1 in partitions(n1, rep.m1):
            for l2 in partitions(n - n1, rep.m2):
                out.append(BiShape(l1, l2))
    return out


def tableau_pairs(q: int, bs: BiShape) -> list[TableauPair]:
    """The index set W_lambda, ordered lexicographically."""
    rep = representative_data(q)
    return list(product(semistandard_tableaux(bs.lambda1, rep.m1),
                        semistandard_tableaux(bs.lambda2, rep.m2)))


# --- substitution tables -------------------------------------------------------------

@lru_cache(maxsize=None)
def pair_forms(q: int, route: Route) -> dict[PairVar, dict[Column, int]]:
    """Linear form of every pair variable ``B_i(j) ⊗ B_i(h)`` in the dual basis.

    The coefficient of class ``P`` is the pairing of ``B_i(j) ⊗ B_i(h)`` with
    the 0/1 tensor supported on the symbol pairs ``(a, b)`` of class ``P``:
    ``pi(0, a, b) = P`` for :attr:`Route.D_CASE` and ``pi(a, a, b) = P`` for
    :attr:`Route.EMPTY_INTEGER`.
    """
    rep = representative_data(q)
    out: dict[PairVar, dict[Column, int]] = {}
    for i in (1, 2):
        B = rep.B(i)
        for j in range(1, rep.m(i) + 1):
            for h in range(1, rep.m(i) + 1):
                form: Counter = Counter()
                for a in np.flatnonzero(B[:, j - 1]):
                    for b in np.flatnonzero(B[:, h - 1]):
                        if route is Route.D_CASE:
                            cls = pi_of((0, int(a), int(b)), q)
                        else:
                            cls = pi_of((int(a), int(a), int(b)), q)
                        form[cls] += int(B[a, j - 1] * B[b, h - 1])
                out[(i, j, h)] = {c: v for c, v in sorted(form.items()) if v}
    return out


def cosine_forms(q: int) -> list[dict[Column, float | int]]:
    """Linear form of ``C_i ⊗ C_i`` in the pair classes ``(0,0,t)``, for i = 0..s-1.

    Integral coefficients are returned as ``int``.
    """
    s = q // 2 + 1
    forms = []
    for i in range(s):
        form: dict[Column, float | int] = {}
        for t in range(q // 2 + 1):
            if t == 0:
                val = float(q)
            elif 2 * t == q:
                val = q * (-1.0) ** i
            else:
                val = 2 * q * math.cos(2 * math.pi * t * i / q)
            form[(0, 0, t)] = _tidy(val)
        forms.append({k: v for k, v in form.items() if v != 0})
    return forms


def _tidy(x: float) -> float | int:
    r = round(x)
    if abs(x - r) < 1e-9:
        return int(r)
    return x


# --- pair-variable polynomials --------------------------------------------------------

@lru_cache(maxsize=None)
def factor_polynomial(shape: Partition, tau: Tableau, sigma: Tableau) -> tuple[tuple[tuple[tuple[int, int], ...], int], ...]:
    """One factor of p_{tau,sigma} as a polynomial in pair variables ``(j, h)``.

    Uses sum_{c,c'} sgn(c c') f(c, c') = |C_lambda| sum_g sgn(g) f(id, g) over
    the column stabilizer, so only one stabilizer loop is needed.
    """
    if not shape:
        return (((), 1),)
    stab = column_stabilizer(shape)
    rows_t = row_rearrangements(tau)
    rows_s = row_rearrangements(sigma)
    size = len(rows_t[0])
    acc: Counter = Counter()
    for g, sign in stab:
        for t in rows_t:
            for s_ in rows_s:
                key = tuple(sorted((t[y], s_[g[y]]) for y in range(size)))
                acc[key] += sign
    mult = len(stab)
    return tuple((k, v * mult) for k, v in sorted(acc.items()) if v)


def _check_pair(q: int, bs: BiShape, pair: TableauPair) -> None:
    rep = representative_data(q)
    t1, t2 = pair
    for tab, shape, m in ((t1, bs.lambda1, rep.m1), (t2, bs.lambda2, rep.m2)):
        if tuple(len(r) for r in tab) != tuple(shape):
            raise ValueError(f"tableau {tab} does not have shape {shape}")
        if not is_semistandard(tab, m):
            raise ValueError(f"tableau {tab} is not semistandard with entries <= {m}")


def pair_polynomial(q: int, bs: BiShape, tau: TableauPair, sigma: TableauPair) -> dict[tuple[PairVar, ...], int]:
    """p_{tau,sigma} as a polynomial in the pair variables of both factors."""
    _check_pair(q, bs, tau)
    _check_pair(q, bs, sigma)
    f1 = factor_polynomial(bs.lambda1, tau[0], sigma[0])
    f2 = factor_polynomial(bs.lambda2, tau[1], sigma[1])
    out: dict[tuple[PairVar, ...], int] = {}
    for m1, c1 in f1:
        k1 = tuple((1, j, h) for j, h in m1)
        for m2, c2 in f2:
            out[k1 + tuple((2, j, h) for j, h in m2)] = c1 * c2
    return out


def substitute(forms: Sequence[dict[Column, int | float]]) -> dict[Monomial, int | float]:
    """Expand a product of linear forms into monomials (sorted class tuples)."""
    poly: dict[Monomial, int | float] = {(): 1}
    for form in forms:
        nxt: dict[Monomial, int | float] = defaultdict(int)
        for mono, c in poly.items():
            for cls, f in form.items():
                nxt[tuple(sorted(mono + (cls,)))] += c * f
        poly = {k: v for k, v in nxt.items() if v != 0}
    return poly


def expand_p_tau_sigma(q: int, bs: BiShape, tau: TableauPair, sigma: TableauPair,
                       route: Route = Route.D_CASE) -> dict[Monomial, int]:
    """The block entry polynomial over dual-basis classes, exact integer coefficients."""
    forms = pair_forms(q, route)
    total: dict[Monomial, int] = defaultdict(int)
    for xmono, coef in pair_polynomial(q, bs, tau, sigma).items():
        for mono, c in substitute([forms[v] for v in xmono]).items():
            total[mono] += coef * c
    return {k: v for k, v in sorted(total.items()) if v}


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Tuples of ``parts`` nonnegative integers summing to ``total``, reverse lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def expand_p_n(q: int, composition: Sequence[int]) -> dict[Monomial, int | float]:
    """Product of ``(C_i ⊗ C_i)^{n_i}`` expanded over the pair classes ``(0,0,t)``."""
    s = q // 2 + 1
    if len(composition) != s:
        raise ValueError(f"composition must have {s} parts for q={q}")
    if any(c < 0 for c in composition):
        raise ValueError("composition entries must be nonnegative")
    forms = cosine_forms(q)
    factors = [forms[i] for i, k in enumerate(composition) for _ in range(k)]
    return dict(sorted(substitute(factors).items()))
