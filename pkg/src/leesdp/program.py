"""Assembly of the reduced B3 / B2 programs over orbit variables z(omega)."""

from __future__ import annotations

import enum
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .lee import Metric
from .repsets import (
    BiShape,
    Route,
    compositions,
    enumerate_bishapes,
    expand_p_n,
    pair_forms,
    pair_polynomial,
    substitute,
    tableau_pairs,
)
from .symmetry import OrbitId, monomial_to_orbit_r, orbit_table, zero_orbit

Number = int | float | Fraction


class EmptyRoute(enum.Enum):
    INTEGER = "integer"
    COSINE = "cosine"

    @classmethod
    def parse(cls, value):
        if isinstance(value, EmptyRoute):
            return value
        return cls(str(value).lower())


class Variant(enum.Enum):
    B2 = "b2"
    B3 = "b3"

    @classmethod
    def parse(cls, value):
        if isinstance(value, Variant):
            return value
        return cls(str(value).lower())


@dataclass
class LinForm:
    """constant + sum coeffs[omega] * z(omega); zero coefficients are never stored."""

    coeffs: dict[OrbitId, Number] = field(default_factory=dict)
    constant: Number = 0

    def is_zero(self) -> bool:
        return not self.coeffs and self.constant == 0

    def add_term(self, omega: OrbitId, c: Number) -> None:
        v = self.coeffs.get(omega, 0) + c
        if v == 0:
            self.coeffs.pop(omega, None)
        else:
            self.coeffs[omega] = v

    def evaluate(self, z: Mapping[OrbitId, Number]) -> Number:
        return self.constant + sum(c * z.get(o, 0) for o, c in self.coeffs.items())

    def is_integral(self) -> bool:
        vals = [self.constant, *self.coeffs.values()]
        return all(isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1) for v in vals)

    def __repr__(self):
        terms = [f"{c}*z{o.code}" for o, c in sorted(self.coeffs.items())]
        if self.constant:
            terms.insert(0, str(self.constant))
        return " + ".join(terms) or "0"


@dataclass
class SdpBlock:
    label: str
    entries: list[list[LinForm]]

    @property
    def dim(self) -> int:
        return len(self.entries)

    def variables(self) -> set[OrbitId]:
        out = set()
        for row in self.entries:
            for e in row:
                out.update(e.coeffs)
        return out

    def evaluate(self, z: Mapping[OrbitId, Number], exact: bool = False):
        if exact:
            return [[Fraction(e.evaluate(z)) for e in row] for row in self.entries]
        return np.array([[float(e.evaluate(z)) for e in row] for row in self.entries])

    def is_symmetric(self) -> bool:
        n = self.dim
        return all(self.entries[i][j].coeffs == self.entries[j][i].coeffs
                   and self.entries[i][j].constant == self.entries[j][i].constant
                   for i in range(n) for j in range(i))


@dataclass
class SdpProgram:
    """Maximize objective subject to every block being PSD."""

    q: int
    n: int
    d: int
    metric: Metric
    variant: Variant
    route: EmptyRoute
    variables: list[OrbitId]
    objective: LinForm
    blocks: list[SdpBlock]

    def summary(self, scale: bool = False) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "d": self.d,
            "metric": self.metric.value,
            "variant": self.variant.value,
            "route": self.route.value,
            "num_vars": len(self.variables),
            "blocks": [{"label": b.label, "dim": b.dim} for b in self.blocks],
            "objective_scale": 1 if scale else self.q ** self.n,
        }

    def summary_json(self, scale: bool = False) -> str:
        return json.dumps(self.summary(scale), indent=1)

    def evaluate(self, z: Mapping[OrbitId, Number], exact: bool = False):
        return [b.evaluate(z, exact) for b in self.blocks]

    def objective_value(self, z: Mapping[OrbitId, Number]) -> Number:
        return self.objective.evaluate(z)


# --- block assembly -------------------------------------------------------------------

class _Substituter:
    """Turns pair-variable monomials into linear forms over feasible orbit variables."""

    def __init__(self, q: int, n: int, d: int, metric: Metric, route: Route):
        self.q, self.n, self.d, self.metric = q, n, d, metric
        self.forms = pair_forms(q, route)
        self.cache: dict[tuple, dict[OrbitId, int]] = {}

    def orbit(self, mono) -> OrbitId | None:
        omega = monomial_to_orbit_r(mono, self.q)
        return omega if omega.is_feasible(self.d, self.metric) else None

    def linear(self, xmono: tuple) -> dict[OrbitId, int]:
        key = tuple(sorted(xmono))
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        acc: dict[OrbitId, int] = defaultdict(int)
        for mono, c in substitute([self.forms[v] for v in key]).items():
            omega = self.orbit(mono)
            if omega is not None:
                acc[omega] += c
        out = {o: c for o, c in acc.items() if c}
        self.cache[key] = out
        return out

    def entry(self, bs: BiShape, tau, sigma) -> LinForm:
        form = LinForm()
        for xmono, coef in pair_polynomial(self.q, bs, tau, sigma).items():
            for omega, c in self.linear(xmono).items():
                form.add_term(omega, coef * c)
        return form


def _prune(label: str, entries: list[list[LinForm]]) -> SdpBlock | None:
    keep = [i for i, row in enumerate(entries) if not all(e.is_zero() for e in row)]
    if not keep:
        return None
    return SdpBlock(label, [[entries[i][j] for j in keep] for i in keep])


def _bishape_blocks(q, n, d, metric, route: Route, prefix: str) -> list[SdpBlock]:
    sub = _Substituter(q, n, d, metric, route)
    blocks = []
    for bs in enumerate_bishapes(q, n):
        W = tableau_pairs(q, bs)
        if not W:
            continue
        m = len(W)
        entries = [[None] * m for _ in range(m)]
        for a in range(m):
            for b in range(a, m):
                e = sub.entry(bs, W[a], W[b])
                entries[a][b] = e
                entries[b][a] = e
        block = _prune(f"{prefix} {bs.label}", entries)
        if block is not None:
            blocks.append(block)
    return blocks


def build_blocks_D1(q: int, n: int, d: int, metric: Metric | str) -> list[SdpBlock]:
    """Reduced blocks of M_{3,{0}}: one per bishape, entries over triple orbits."""
    return _bishape_blocks(q, n, d, Metric.parse(metric), Route.D_CASE, "D1")


def _cosine_form(q, n, d, metric, composition) -> LinForm:
    form = LinForm()
    for mono, c in expand_p_n(q, composition).items():
        omega = monomial_to_orbit_r(mono, q)
        if omega.is_feasible(d, metric):
            form.add_term(omega, c)
    return form


def t_block(q: int, n: int, d: int, metric: Metric) -> SdpBlock:
    """The 2x2 block coupling the empty code with the all-ones vector."""
    z0 = zero_orbit(n)
    corner = LinForm({z0: q ** n})
    tail = _cosine_form(q, n, d, metric, (n,) + (0,) * (q // 2))
    return SdpBlock("T", [[LinForm(constant=1), corner], [LinForm(dict(corner.coeffs)), tail]])


def build_blocks_Dempty(q: int, n: int, d: int, metric: Metric | str,
                        route: EmptyRoute | str = EmptyRoute.INTEGER) -> list[SdpBlock]:
    """Reduced blocks of M_{2,empty} (pair orbits only), ending with the T block."""
    metric = Metric.parse(metric)
    route = EmptyRoute.parse(route)
    blocks: list[SdpBlock] = []
    if route is EmptyRoute.INTEGER:
        blocks.extend(_bishape_blocks(q, n, d, metric, Route.EMPTY_INTEGER, "E"))
    else:
        s = q // 2 + 1
        for comp in compositions(n, s):
            if comp[0] == n:
                continue
            form = _cosine_form(q, n, d, metric, comp)
            if not form.is_zero():
                blocks.append(SdpBlock("C (" + ",".join(map(str, comp)) + ")", [[form]]))
    blocks.append(t_block(q, n, d, metric))
    return blocks


def _nonneg_blocks(variables: Iterable[OrbitId]) -> list[SdpBlock]:
    out = []
    for o in variables:
        code = " ".join("".join(map(str, w)) for w in o.code)
        out.append(SdpBlock(f"nonneg {code}", [[LinForm({o: 1})]]))
    return out


def build_program(q: int, n: int, d: int, metric: Metric | str = Metric.LEE,
                  variant: Variant | str = Variant.B3,
                  route: EmptyRoute | str | None = None) -> SdpProgram:
    """The reduced B3 program (or B2 with ``variant='b2'``)."""
    metric = Metric.parse(metric)
    variant = Variant.parse(variant)
    if route is None:
        route = EmptyRoute.INTEGER if variant is Variant.B3 else EmptyRoute.COSINE
    route = EmptyRoute.parse(route)
    if q < 2 or n < 1 or d < 1:
        raise ValueError("need q >= 2, n >= 1, d >= 1")
    k = 3 if variant is Variant.B3 else 2
    variables = orbit_table(q, n, k).feasible(d, metric)
    blocks: list[SdpBlock] = []
    if variant is Variant.B3:
        blocks.extend(build_blocks_D1(q, n, d, metric))
    blocks.extend(build_blocks_Dempty(q, n, d, metric, route))
    blocks.extend(_nonneg_blocks(variables))
    used = set().union(*(b.variables() for b in blocks))
    if not used <= set(variables):
        raise AssertionError("block references a variable outside the program")
    objective = LinForm({zero_orbit(n): q ** n})
    return SdpProgram(q, n, d, metric, variant, route, list(variables), objective, blocks)


def build_lp_b2(q: int, n: int, d: int, metric: Metric | str = Metric.LEE,
                route: EmptyRoute | str = EmptyRoute.COSINE) -> SdpProgram:
    """The pair-based bound; with the cosine route every block except T is 1x1."""
    return build_program(q, n, d, metric, Variant.B2, route)
