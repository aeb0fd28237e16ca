"""The Lee isometry group D_q^n ⋊ S_n acting on codes of size at most three.

A code with ``k`` words is viewed as an ``k x n`` array. Its ``n`` columns are
points of Z_q^k; the dihedral group acts on each column independently and S_n
permutes the columns, so an orbit is determined by the multiset of column
classes once the order of the words is fixed. The canonical key of a code is
``(k, columns)`` where ``columns`` is the smallest sorted tuple of column
classes over all orderings of the words.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations, product
from typing import Iterable, Sequence

from .lee import INFINITY, Metric, lee_distance, lee_inf_distance

Column = tuple[int, ...]


def dihedral_images(t: Sequence[int], q: int) -> list[Column]:
    """The 2q images of ``t`` under rotations ``x -> x+s`` and reflections ``x -> s-x``."""
    if len(t) < 1:
        raise ValueError("arity must be at least 1")
    out = []
    for s in range(q):
        out.append(tuple((x + s) % q for x in t))
        out.append(tuple((s - x) % q for x in t))
    return out


@lru_cache(maxsize=None)
def class_table(q: int, arity: int) -> dict[Column, Column]:
    """Map every point of Z_q^arity to the lexicographic minimum of its dihedral orbit."""
    table: dict[Column, Column] = {}
    for t in product(range(q), repeat=arity):
        if t not in table:
            images = dihedral_images(t, q)
            rep = min(images)
            for im in images:
                table[im] = rep
    return table


def pi_of(v: Sequence[int], q: int) -> Column:
    return class_table(q, len(v))[tuple(v)]


@lru_cache(maxsize=None)
def enumerate_pi(q: int, arity: int = 3) -> tuple[Column, ...]:
    """All dihedral column classes of the given arity, sorted.

    For arity 3 these are the labels of the invariant basis used in the
    ``|D| = 1`` reduction; every label starts with 0.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    return tuple(sorted(set(class_table(q, arity).values())))


def enumerate_pi_prime(q: int) -> tuple[Column, ...]:
    """Classes ``(0, 0, t)`` for ``t = 0..q//2``; they label pairs of symbols at circular distance t."""
    return tuple((0, 0, t) for t in range(q // 2 + 1))


def class_size(c: Column, q: int) -> int:
    return len(set(dihedral_images(c, q)))


@dataclass(frozen=True, order=True)
class OrbitId:
    """An H-orbit of codes, identified by its canonical key.

    ``key`` is ``(size, columns)``; the remaining fields are cached metadata and
    do not take part in equality or ordering.
    """

    key: tuple
    size: int = field(compare=False)
    d_lee: float = field(compare=False)
    d_inf: float = field(compare=False)

    @property
    def code(self) -> tuple[tuple[int, ...], ...]:
        """A representative code (sorted words); it always contains the zero word."""
        size, columns = self.key
        if size == 0:
            return ()
        return tuple(sorted(tuple(col[r] for col in columns) for r in range(size)))

    def min_distance(self, metric: Metric) -> float:
        return self.d_lee if metric is Metric.LEE else self.d_inf

    def is_feasible(self, d: int, metric: Metric) -> bool:
        return self.min_distance(metric) >= d

    def __repr__(self) -> str:
        return f"OrbitId({self.code})"


def _key_from_columns(columns: Sequence[Column], k: int, q: int) -> tuple:
    table = class_table(q, k)
    best = None
    for p in permutations(range(k)):
        cand = tuple(sorted(table[tuple(c[i] for i in p)] for c in columns))
        if best is None or cand < best:
            best = cand
    return (k, best)


def canonical_key(code: Iterable[Sequence[int]], q: int) -> tuple:
    words = sorted(set(tuple(w) for w in code))
    k = len(words)
    if k == 0:
        return (0, ())
    n = len(words[0])
    if any(len(w) != n for w in words):
        raise ValueError("all words of a code must have the same length")
    columns = [tuple(w[i] for w in words) for i in range(n)]
    return _key_from_columns(columns, k, q)


def _orbit_from_key(key: tuple, q: int) -> OrbitId:
    size, columns = key
    words = [tuple(col[r] for col in columns) for r in range(size)]
    d_lee = min((lee_distance(u, v, q) for u, v in combinations(words, 2)), default=INFINITY)
    d_inf = min((lee_inf_distance(u, v, q) for u, v in combinations(words, 2)), default=INFINITY)
    return OrbitId(key, size, d_lee, d_inf)


@lru_cache(maxsize=1 << 20)
def _orbit_cached(key: tuple, q: int) -> OrbitId:
    return _orbit_from_key(key, q)


def canonical_code(code: Iterable[Sequence[int]], q: int) -> OrbitId:
    """The orbit of ``code`` under D_q^n ⋊ S_n."""
    return _orbit_cached(canonical_key(code, q), q)


def _realize(classes: Sequence[Column]) -> list[tuple[int, ...]]:
    arity = len(classes[0])
    return [tuple(c[r] for c in classes) for r in range(arity)]


@lru_cache(maxsize=1 << 20)
def _r_cached(mu: tuple, q: int) -> OrbitId:
    return canonical_code(_realize(mu), q)


def monomial_to_orbit_r(mu: Sequence[Column], q: int) -> OrbitId:
    """Orbit of the code ``{0, alpha, beta}`` realized column by column from ``mu``.

    Each class ``(0, a, b)`` contributes one coordinate with ``alpha_i = a`` and
    ``beta_i = b``; coinciding words collapse to a smaller code.
    """
    return _r_cached(tuple(sorted(mu)), q)


def monomial_to_orbit_r_prime(mu: Sequence[Column], q: int) -> OrbitId:
    """Orbit of the pair ``{0, beta}`` with ``beta_i = t_i`` for classes ``(0, 0, t_i)``."""
    for c in mu:
        if c[0] != 0 or c[1] != 0:
            raise ValueError(f"not a pair class: {c}")
    return _r_cached(tuple(sorted(mu)), q)


def empty_orbit() -> OrbitId:
    return OrbitId((0, ()), 0, INFINITY, INFINITY)


def zero_orbit(n: int) -> OrbitId:
    """The orbit of all codes of size one."""
    return OrbitId((1, ((0,),) * n), 1, INFINITY, INFINITY)


class OrbitTable:
    """Immutable list of the nonempty orbits of codes of size <= k, sorted by key."""

    def __init__(self, q: int, n: int, k: int, orbits: Sequence[OrbitId]):
        self.q, self.n, self.k = q, n, k
        self.orbits = tuple(sorted(orbits))
        self.index = {o: i for i, o in enumerate(self.orbits)}

    def __len__(self) -> int:
        return len(self.orbits)

    def __iter__(self):
        return iter(self.orbits)

    def feasible(self, d: int, metric: Metric) -> list[OrbitId]:
        return [o for o in self.orbits if o.is_feasible(d, metric)]

    def dump(self) -> str:
        """Tab-separated lines: canonical code, size, Lee and Lee-inf minimum distance."""
        lines = []
        for o in self.orbits:
            code = " ".join("".join(map(str, w)) for w in o.code)
            lines.append(f"{code}\t{o.size}\t{_fmt(o.d_lee)}\t{_fmt(o.d_inf)}")
        return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return "inf" if x == INFINITY else str(int(x))


@lru_cache(maxsize=None)
def orbit_table(q: int, n: int, k: int = 3) -> OrbitTable:
    if not 1 <= k <= 3:
        raise ValueError("only codes of size at most 3 are supported")
    if n < 1:
        raise ValueError("n must be positive")
    seen: set[tuple] = set()
    # every nonempty code of size <= k can be moved to contain 0 and then
    # written as a multiset of arity-k column classes whose first row is zero
    for ms in combinations_with_replacement(enumerate_pi(q, k), n):
        rows = _realize(ms)
        distinct = sorted(set(rows))
        if len(distinct) < k:
            idx = [rows.index(w) for w in distinct]
            cols = [tuple(c[i] for i in idx) for c in ms]
            key = _key_from_columns(cols, len(distinct), q)
        else:
            key = _key_from_columns(ms, k, q)
        seen.add(key)
    return OrbitTable(q, n, k, [_orbit_cached(key, q) for key in seen])


def enumerate_orbits(q: int, n: int, k: int, d: int, metric: Metric) -> tuple[list[OrbitId], list[OrbitId]]:
    """All nonempty orbits of codes of size <= k, and those with minimum distance >= d."""
    table = orbit_table(q, n, k)
    return list(table.orbits), table.feasible(d, metric)


def orbit_size(omega: OrbitId, q: int) -> int:
    """Number of codes in the orbit, counted from the column classes of its key."""
    size, columns = omega.key
    if size == 0:
        return 1
    n = len(columns)
    table = class_table(q, size)
    multisets = set()
    for p in permutations(range(size)):
        multisets.add(tuple(sorted(table[tuple(c[i] for i in p)] for c in columns)))
    ordered = 0
    for ms in multisets:
        counts = Counter(ms)
        ways = math.factorial(n)
        for c, m in counts.items():
            ways //= math.factorial(m)
            ways *= class_size(c, q) ** m
        ordered += ways
    return ordered // math.factorial(size)
