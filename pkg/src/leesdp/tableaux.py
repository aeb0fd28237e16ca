"""Partitions, semistandard Young tableaux and the row/column symmetrizer data.

A tableau is stored as a tuple of rows, each row a tuple of entries in
``1..m``. Cells are ordered by concatenating the rows; every flat
representation below (``flat``, row rearrangements, column permutations) uses
that order.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product
from math import factorial, prod

Partition = tuple[int, ...]
Tableau = tuple[tuple[int, ...], ...]


@lru_cache(maxsize=None)
def partitions(n: int, max_height: int | None = None) -> tuple[Partition, ...]:
    """All partitions of ``n`` (weakly decreasing, positive parts), largest first.

    ``partitions(0)`` is ``((),)``: the empty partition.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    out: list[Partition] = []

    def rec(remaining: int, cap: int, acc: list[int]) -> None:
        if remaining == 0:
            out.append(tuple(acc))
            return
        if max_height is not None and len(acc) >= max_height:
            return
        for part in range(min(cap, remaining), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(n, n, [])
    return tuple(out)


def is_partition(shape) -> bool:
    return all(p > 0 for p in shape) and all(a >= b for a, b in zip(shape, shape[1:]))


def conjugate(shape: Partition) -> Partition:
    if not shape:
        return ()
    return tuple(sum(1 for p in shape if p > c) for c in range(shape[0]))


@lru_cache(maxsize=None)
def semistandard_tableaux(shape: Partition, m: int) -> tuple[Tableau, ...]:
    """Every semistandard tableau of ``shape`` with entries in ``1..m``.

    Rows weakly increase, columns strictly increase. The result is sorted
    lexicographically by the flattened filling, which fixes the row/column
    order of every block built from it.
    """
    shape = tuple(shape)
    if not is_partition(shape):
        raise ValueError(f"not a partition: {shape}")
    if len(shape) > m:
        return ()
    if not shape:
        return ((),)

    results: list[Tableau] = []
    rows: list[tuple[int, ...]] = []

    def fill_row(r: int) -> None:
        if r == len(shape):
            results.append(tuple(rows))
            return
        above = rows[r - 1] if r else None
        length = shape[r]
        row: list[int] = []

        def cell(c: int) -> None:
            if c == length:
                rows.append(tuple(row))
                fill_row(r + 1)
                rows.pop()
                return
            lo = row[-1] if row else 1
            if above is not None:
                lo = max(lo, above[c] + 1)
            # leave room for the strictly increasing column below this cell
            below = sum(1 for p in shape[r + 1:] if p > c)
            for v in range(lo, m - below + 1):
                row.append(v)
                cell(c + 1)
                row.pop()

        cell(0)

    fill_row(0)
    results.sort(key=flat)
    return tuple(results)


def flat(tableau: Tableau) -> tuple[int, ...]:
    return tuple(v for row in tableau for v in row)


def is_semistandard(tableau: Tableau, m: int | None = None) -> bool:
    shape = tuple(len(r) for r in tableau)
    if not is_partition(shape):
        return False
    for r, row in enumerate(tableau):
        if any(a > b for a, b in zip(row, row[1:])):
            return False
        if r and any(tableau[r - 1][c] >= row[c] for c in range(len(row))):
            return False
        if m is not None and any(v < 1 or v > m for v in row):
            return False
    return True


def hook_content_count(shape: Partition, m: int) -> int:
    """Number of semistandard tableaux of ``shape`` with entries <= m (hook-content formula)."""
    conj = conjugate(shape)
    num = 1
    den = 1
    for i, row_len in enumerate(shape):
        for j in range(row_len):
            num *= m + j - i
            den *= (row_len - j - 1) + (conj[j] - i - 1) + 1
    return num // den


@lru_cache(maxsize=None)
def row_rearrangements(tableau: Tableau) -> tuple[tuple[int, ...], ...]:
    """Distinct flat fillings obtained by permuting entries inside each row."""
    per_row = [sorted(set(permutations(row))) for row in tableau]
    return tuple(tuple(v for part in combo for v in part) for combo in product(*per_row))


def _sign(perm: tuple[int, ...]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def column_stabilizer(shape: Partition) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Elements of the column stabilizer as (cell permutation, sign) pairs.

    A permutation ``c`` maps flat cell index ``y`` to ``c[y]`` and only moves
    cells within their column.
    """
    shape = tuple(shape)
    offsets = [sum(shape[:r]) for r in range(len(shape))]
    columns = [[offsets[r] + c for r in range(len(shape)) if shape[r] > c]
               for c in range(shape[0] if shape else 0)]
    size = sum(shape)
    out = []
    for choice in product(*(permutations(col) for col in columns)):
        perm = list(range(size))
        for col, image in zip(columns, choice):
            for src, dst in zip(col, image):
                perm[src] = dst
        perm_t = tuple(perm)
        out.append((perm_t, _sign(perm_t)))
    assert len(out) == prod(factorial(len(col)) for col in columns)
    return tuple(out)
