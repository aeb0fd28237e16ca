"""Words over Z_q, the Lee and Lee-infinity metrics, and code minimum distance."""

from __future__ import annotations

import enum
import math
from itertools import combinations
from typing import Iterable, Sequence

# Minimum distance of a code with at most one word; compares above every integer.
INFINITY = math.inf

Word = tuple[int, ...]


class Metric(enum.Enum):
    LEE = "lee"
    LEE_INF = "lee-inf"

    @classmethod
    def parse(cls, value: "str | Metric") -> "Metric":
        if isinstance(value, Metric):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for m in cls:
            if m.value == key:
                return m
        raise ValueError(f"unknown metric: {value!r}")


def check_word(u: Sequence[int], q: int, n: int | None = None) -> Word:
    w = tuple(int(x) for x in u)
    if q < 2:
        raise ValueError("alphabet size q must be at least 2")
    if n is not None and len(w) != n:
        raise ValueError(f"word {w} has length {len(w)}, expected {n}")
    if any(x < 0 or x >= q for x in w):
        raise ValueError(f"word {w} has a symbol outside Z_{q}")
    return w


def circular_distance(a: int, b: int, q: int) -> int:
    t = abs(a - b) % q
    return min(t, q - t)


def _pair(u, v, q):
    if len(u) != len(v):
        raise ValueError(f"words of different lengths: {len(u)} != {len(v)}")
    if len(u) == 0:
        raise ValueError("words must have length at least 1")
    return check_word(u, q), check_word(v, q)


def lee_distance(u: Sequence[int], v: Sequence[int], q: int) -> int:
    u, v = _pair(u, v, q)
    return sum(circular_distance(a, b, q) for a, b in zip(u, v))


def lee_inf_distance(u: Sequence[int], v: Sequence[int], q: int) -> int:
    u, v = _pair(u, v, q)
    return max(circular_distance(a, b, q) for a, b in zip(u, v))


def distance(u: Sequence[int], v: Sequence[int], q: int, metric: Metric) -> int:
    if metric is Metric.LEE:
        return lee_distance(u, v, q)
    return lee_inf_distance(u, v, q)


def min_distance(code: Iterable[Sequence[int]], q: int, metric: Metric = Metric.LEE) -> float:
    """Smallest pairwise distance in the code; ``INFINITY`` when it has at most one word."""
    words = sorted(set(tuple(w) for w in code))
    return min((distance(u, v, q, metric) for u, v in combinations(words, 2)), default=INFINITY)
