"""Brute-force cross-checks of the reduced programs at small q^n.

Everything here works with explicit objects of size q^n: representative
vectors as literal tensors, the 0/1 matrices N_omega, and the unreduced
moment matrices. None of it goes through the pair-variable expansion.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .lee import Metric, check_word, min_distance
from .program import (
    EmptyRoute,
    SdpBlock,
    SdpProgram,
    build_blocks_D1,
    build_blocks_Dempty,
    build_program,
)
from .oracle import _local_search, brute_force_optimum
from .repsets import BiShape, enumerate_bishapes, representative_data, tableau_pairs
from .symmetry import OrbitId, canonical_code, orbit_size, orbit_table, zero_orbit
from .tableaux import column_stabilizer, row_rearrangements

EXPLICIT_CAP = 2500
SOUNDNESS_CAP = 625
PSD_TOL = 1e-8


class CapExceeded(ValueError):
    pass


def _cap(q, n, cap):
    if q ** n > cap:
        raise CapExceeded(f"q^n = {q ** n} exceeds the explicit-size cap {cap}")


# --- explicit vectors and matrices -----------------------------------------------------

def _factor_tensor(B: np.ndarray, shape, tableau) -> np.ndarray:
    """u_{tau,B} = sum_{tau' ~ tau} sum_{c in C_lambda} sgn(c) ⊗_y B(tau'(c(y)))."""
    q = B.shape[0]
    if not shape:
        return np.ones(1, dtype=np.int64)
    cells = sum(shape)
    out = np.zeros(q ** cells, dtype=np.int64)
    for t in row_rearrangements(tableau):
        for g, sign in column_stabilizer(shape):
            cols = [B[:, t[g[y]] - 1] for y in range(cells)]
            out += sign * reduce(np.kron, cols)
    return out


def explicit_u_tau(q: int, bs: BiShape, tau, cap: int = EXPLICIT_CAP) -> np.ndarray:
    """The representative vector v_tau in C^{q^n}, word index in base q (first coordinate most significant).

    The cells of lambda1 occupy the first n1 coordinates, those of lambda2 the rest.
    """
    n = bs.n1 + bs.n2
    _cap(q, n, cap)
    rep = representative_data(q)
    u1 = _factor_tensor(rep.B1, bs.lambda1, tau[0])
    u2 = _factor_tensor(rep.B2, bs.lambda2, tau[1])
    return np.kron(u1, u2)


def explicit_cosine_vector(q: int, composition: Sequence[int]) -> np.ndarray:
    """⊗ of the cosine columns, composition[i] copies of column i."""
    rep = representative_data(q)
    cols = [rep.C[:, i] for i, k in enumerate(composition) for _ in range(k)]
    return reduce(np.kron, cols)


def words(q: int, n: int) -> list[tuple[int, ...]]:
    return list(product(range(q), repeat=n))


@lru_cache(maxsize=16)
def _labels(q: int, n: int, d_size: int):
    """Orbit of {0, a, b} (d_size 1) or {a, b} (d_size 0) for all pairs of words."""
    W = words(q, n)
    zero = (0,) * n
    orbits: list[OrbitId] = []
    index: dict[OrbitId, int] = {}
    memo: dict[tuple, int] = {}
    L = np.empty((len(W), len(W)), dtype=np.int64)
    for i, a in enumerate(W):
        for j in range(i, len(W)):
            b = W[j]
            code = {zero, a, b} if d_size == 1 else {a, b}
            # codes with equal column multisets are S_n-equivalent
            srt = sorted(code)
            ck = tuple(sorted(zip(*srt)))
            k = memo.get(ck)
            if k is None:
                o = canonical_code(srt, q)
                if o not in index:
                    index[o] = len(orbits)
                    orbits.append(o)
                k = memo[ck] = index[o]
            L[i, j] = L[j, i] = k
    return L, tuple(orbits)


def explicit_N_omega(q: int, n: int, d_size: int, omega: OrbitId, cap: int = EXPLICIT_CAP) -> np.ndarray:
    """0/1 matrix over Z_q^n: entry (a, b) is 1 iff {0,a,b} (d_size 1) or {a,b} (d_size 0) lies in omega."""
    if d_size not in (0, 1):
        raise ValueError("d_size must be 0 or 1")
    _cap(q, n, cap)
    L, orbits = _labels(q, n, d_size)
    if omega not in orbits:
        return np.zeros(L.shape, dtype=np.int64)
    return (L == orbits.index(omega)).astype(np.int64)


def explicit_moment_matrix(q: int, n: int, d_size: int, z: Mapping[OrbitId, float],
                           cap: int = SOUNDNESS_CAP) -> np.ndarray:
    """The unreduced M_{3,{0}}(z) (d_size 1, rows {0,a}) or M_{2,empty}(z) (d_size 0, rows empty + {a})."""
    _cap(q, n, cap)
    L, orbits = _labels(q, n, d_size)
    vals = np.array([float(z.get(o, 0.0)) for o in orbits])
    M = vals[L]
    if d_size == 1:
        return M
    qn = q ** n
    out = np.empty((qn + 1, qn + 1))
    out[0, 0] = 1.0
    out[0, 1:] = out[1:, 0] = float(z.get(zero_orbit(n), 0.0))
    out[1:, 1:] = M
    return out


# --- PSD ---------------------------------------------------------------------------

def _as_matrix(m):
    if isinstance(m, SdpBlock):
        raise TypeError("evaluate the block first")
    return m


def is_symmetric(m, tol: float = 1e-12) -> bool:
    if isinstance(m, np.ndarray) and m.dtype.kind == "f":
        return m.shape[0] == m.shape[1] and np.allclose(m, m.T, atol=tol, rtol=0)
    n = len(m)
    return all(len(row) == n for row in m) and all(m[i][j] == m[j][i] for i in range(n) for j in range(i))


def exact_psd(m: Sequence[Sequence]) -> bool:
    """Symmetric pivoted elimination over the rationals."""
    A = [[Fraction(x) for x in row] for row in m]
    n = len(A)
    alive = list(range(n))
    while alive:
        p = max(alive, key=lambda i: A[i][i])
        piv = A[p][p]
        if piv < 0:
            return False
        if piv == 0:
            # all remaining diagonal entries are 0, so the rest must vanish
            return all(A[i][j] == 0 for i in alive for j in alive)
        alive.remove(p)
        for i in alive:
            f = A[i][p] / piv
            if f:
                for j in alive:
                    A[i][j] -= f * A[p][j]
    return True


def psd_check(m, tol: float = PSD_TOL, exact: bool | None = None) -> bool:
    """True iff ``m`` is positive semidefinite (min eigenvalue >= -tol, or exact elimination)."""
    m = _as_matrix(m)
    if not is_symmetric(m):
        raise ValueError("psd_check needs a symmetric matrix")
    if exact is None:
        exact = not isinstance(m, np.ndarray) or m.dtype.kind in "iuO"
    if exact:
        return exact_psd(m)
    arr = np.asarray(m, dtype=float)
    if arr.size == 0:
        return True
    return bool(np.linalg.eigvalsh(arr)[0] >= -tol)


def min_eigenvalue(m) -> float:
    arr = np.asarray(m, dtype=float)
    return float(np.linalg.eigvalsh(arr)[0]) if arr.size else 0.0


# --- reports ---------------------------------------------------------------------------

@dataclass
class Report:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def text(self) -> str:
        head = f"{'PASS' if self.ok else 'FAIL'} {self.name}: {self.checked} checked, {len(self.failures)} failed"
        lines = [head] + ["  " + n for n in self.notes] + ["  mismatch: " + f for f in self.failures[:5]]
        return "\n".join(lines)


def _coefficients(L, orbits, u, v) -> dict[OrbitId, int]:
    w = np.outer(u, v).ravel()
    sums = np.bincount(L.ravel(), weights=w.astype(float), minlength=len(orbits))
    if np.abs(w).max(initial=0) * w.size >= 2 ** 52:
        raise OverflowError("explicit coefficient too large for exact float accumulation")
    return {orbits[k]: int(round(s)) for k, s in enumerate(sums) if round(s) != 0}


def check_block_coefficients(q: int, n: int, route: str = "d1", cap: int = EXPLICIT_CAP) -> Report:
    """Compare every assembled entry with v_tau^T N_omega v_sigma from explicit tensors.

    ``route`` is ``d1`` (blocks of M_{3,{0}}), ``empty-integer`` (the S_2 blocks
    of the word part of M_{2,empty} plus the corner of T) or ``cosine``
    (diagonal blocks, compared in floating point).
    """
    _cap(q, n, cap)
    rep = Report(f"block coefficients q={q} n={n} route={route}")
    if route == "d1":
        blocks = build_blocks_D1(q, n, 1, Metric.LEE)
        d_size = 1
    elif route == "empty-integer":
        blocks = build_blocks_Dempty(q, n, 1, Metric.LEE, EmptyRoute.INTEGER)
        d_size = 0
    elif route == "cosine":
        return _check_cosine(q, n, rep)
    else:
        raise ValueError(f"unknown route {route!r}")
    L, orbits = _labels(q, n, d_size)
    by_label = {b.label: b for b in blocks}
    prefix = "D1" if d_size == 1 else "E"
    for bs in enumerate_bishapes(q, n):
        W = tableau_pairs(q, bs)
        vecs = [explicit_u_tau(q, bs, t, cap) for t in W]
        expected = [[_coefficients(L, orbits, vecs[a], vecs[b]) for b in range(len(W))] for a in range(len(W))]
        nonzero = [a for a in range(len(W)) if any(expected[a][b] for b in range(len(W)))]
        block = by_label.pop(f"{prefix} {bs.label}", None)
        if block is None:
            if nonzero:
                rep.fail(f"{bs.label}: block missing")
            continue
        if block.dim != len(nonzero):
            rep.fail(f"{bs.label}: dim {block.dim}, expected {len(nonzero)}")
            continue
        for x, a in enumerate(nonzero):
            for y, b in enumerate(nonzero):
                rep.checked += 1
                got = block.entries[x][y]
                if got.constant != 0 or got.coeffs != expected[a][b]:
                    rep.fail(f"{bs.label} ({W[a]}, {W[b]}): {got.coeffs} != {expected[a][b]}")
    if d_size == 0:
        T = by_label.pop("T")
        ones = np.ones(q ** n, dtype=np.int64)
        rep.checked += 1
        if T.entries[1][1].coeffs != _coefficients(L, orbits, ones, ones):
            rep.fail("T corner differs from 1^T M 1")
        if T.entries[0][1].coeffs != {zero_orbit(n): q ** n} or T.entries[0][0].constant != 1:
            rep.fail("T first row is not (1, q^n z0)")
    if by_label:
        rep.fail(f"unexpected blocks {sorted(by_label)}")
    return rep


def _check_cosine(q, n, rep: Report) -> Report:
    from .repsets import compositions

    blocks = {b.label: b for b in build_blocks_Dempty(q, n, 1, Metric.LEE, EmptyRoute.COSINE)}
    L, orbits = _labels(q, n, 0)
    s = q // 2 + 1
    for comp in compositions(n, s):
        v = explicit_cosine_vector(q, comp)
        w = np.outer(v, v).ravel()
        sums = np.bincount(L.ravel(), weights=w, minlength=len(orbits))
        if comp[0] == n:
            got = blocks["T"].entries[1][1].coeffs
        else:
            b = blocks.get("C (" + ",".join(map(str, comp)) + ")")
            got = b.entries[0][0].coeffs if b else {}
        rep.checked += 1
        for k, val in enumerate(sums):
            if abs(float(got.get(orbits[k], 0)) - val) > 1e-7 * max(1.0, abs(val)):
                rep.fail(f"{comp}: coefficient of {orbits[k].code} {got.get(orbits[k], 0)} != {val}")
                break
        # off-diagonal entries between distinct compositions vanish
    comps = list(compositions(n, s))
    for a, b in combinations(comps, 2):
        va, vb = explicit_cosine_vector(q, a), explicit_cosine_vector(q, b)
        # the sum over all S_n rearrangements of b is what the reduction pairs with a
        sums = np.bincount(L.ravel(), weights=np.outer(va, vb).ravel(), minlength=len(orbits))
        rep.checked += 1
        if np.abs(sums).max() > 1e-7 * q ** (2 * n):
            rep.fail(f"cross term {a} x {b} is nonzero")
    if q in (2, 3, 4, 6):
        rep.checked += 1
        if all(isinstance(c, int) for b in blocks.values() for row in b.entries
               for e in row for c in e.coeffs.values()):
            rep.notes.append("cosine coefficients integral")
        else:
            rep.fail("cosine route coefficients are not integral")
    return rep


def isotypical_orthogonality(q: int, n: int, tol: float = 1e-8) -> Report:
    """Representative vectors of different bishapes are orthogonal."""
    rep = Report(f"isotypical orthogonality q={q} n={n}")
    vecs = []
    for bs in enumerate_bishapes(q, n):
        for t in tableau_pairs(q, bs):
            vecs.append((bs, explicit_u_tau(q, bs, t).astype(float)))
    for (b1, v1), (b2, v2) in combinations(vecs, 2):
        if b1 == b2:
            continue
        rep.checked += 1
        if abs(v1 @ v2) > tol:
            rep.fail(f"{b1.label} vs {b2.label}: inner product {v1 @ v2}")
    return rep


# --- feasible points ----------------------------------------------------------------

def orbit_average(code: Iterable[Sequence[int]], q: int, k: int = 3) -> dict[OrbitId, Fraction]:
    """z(omega) = |{S in omega : S ⊆ C}| / |omega| for nonempty S of size <= k."""
    C = sorted(set(tuple(w) for w in code))
    counts: Counter = Counter()
    for size in range(1, k + 1):
        for S in combinations(C, size):
            counts[canonical_code(S, q)] += 1
    return {o: Fraction(c, orbit_size(o, q)) for o, c in counts.items()}


def program_psd(p: SdpProgram, z: Mapping[OrbitId, Number], tol: float = PSD_TOL,
                exact: bool = False) -> tuple[bool, float, str]:
    """(all blocks PSD, smallest eigenvalue seen, label of the worst block)."""
    worst, label, ok = math.inf, "", True
    for b in p.blocks:
        if exact:
            good = exact_psd(b.evaluate(z, exact=True))
            ev = 0.0 if good else -1.0
        else:
            M = b.evaluate(z)
            ev = min_eigenvalue(M)
            good = ev >= -tol
        if ev < worst:
            worst, label = ev, b.label
        ok &= good
    return ok, worst, label


Number = int | float | Fraction


def feasibility_transfer(q: int, n: int, d: int, metric: Metric | str, code, program: SdpProgram | None = None,
                         tol: float = PSD_TOL) -> Report:
    """A code with minimum distance >= d gives a feasible point of value |C|."""
    metric = Metric.parse(metric)
    C = sorted(set(tuple(check_word(w, q, n)) for w in code))
    rep = Report(f"feasibility transfer q={q} n={n} d={d} {metric.value} |C|={len(C)}")
    if len(C) > 1 and min_distance(C, q, metric) < d:
        raise ValueError("code does not have the required minimum distance")
    p = program or build_program(q, n, d, metric)
    z = orbit_average(C, q)
    missing = [o for o in z if o not in set(p.variables)]
    if missing:
        rep.fail(f"orbits of subcodes missing from the program: {missing[:3]}")
    ok, worst, label = program_psd(p, z, tol)
    rep.checked += len(p.blocks)
    rep.notes.append(f"min eigenvalue {worst:.3e} in block {label}")
    if not ok:
        rep.fail(f"block {label} has eigenvalue {worst:.3e}")
    val = p.objective_value(z)
    rep.checked += 1
    if val != len(C):
        rep.fail(f"objective {val} != |C| = {len(C)}")
    return rep


# --- soundness of the reduction ---------------------------------------------------------

def _random_code(q, n, rng, size):
    W = words(q, n)
    idx = rng.choice(len(W), size=min(size, len(W)), replace=False)
    return [W[i] for i in idx]


def _edge_assignment(q, n, orbits, rng, inside: bool):
    """A point just inside or outside the PSD boundary of one explicit compression U^T M U.

    The walk starts at z = p^|omega| (moment matrices of independent inclusion,
    positive definite) and follows a sparse random direction. Outside, the
    unreduced matrix is certainly not PSD, so the matching reduced block must
    report it.
    """
    d_size = int(rng.integers(2))
    shapes = enumerate_bishapes(q, n)
    bs = shapes[int(rng.integers(len(shapes)))]
    U = np.column_stack([explicit_u_tau(q, bs, t) for t in tableau_pairs(q, bs)]).astype(float)
    p = float(rng.uniform(0.05, 0.3))
    base = {o: p ** o.size for o in orbits}
    keep = rng.random(len(orbits)) < rng.uniform(0.1, 1.0)
    delta = {o: float(rng.normal()) * base[o] * k for o, k in zip(orbits, keep)}

    def at(t):
        return {o: base[o] + t * delta[o] for o in orbits}

    def ok(t):
        M = explicit_moment_matrix(q, n, d_size, at(t))
        if d_size == 0:
            M = M[1:, 1:]
        return _relative_min_eig(U.T @ M @ U) >= 0

    lo, hi = 0.0, 1.0
    while ok(hi) and hi < 1e6:
        lo, hi = hi, 2 * hi
    for _ in range(40):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    return at(lo * 0.98 if inside else hi * 1.02)


def random_assignments(q: int, n: int, trials: int, rng: np.random.Generator):
    """H-invariant assignments: code averages, mixtures, perturbations, random positives,
    and points just either side of the PSD boundary of one isotypic compression."""
    orbits = list(orbit_table(q, n, 3))
    z0 = zero_orbit(n)
    for t in range(trials):
        kind = t % 7
        if kind >= 5:
            yield "edge", _edge_assignment(q, n, orbits, rng, kind == 5)
            continue
        if kind == 4:
            z = {o: float(rng.random()) for o in orbits}
            z[z0] = float(rng.random()) * 0.5 / q ** n + 1e-3
            yield "random", z
            continue
        z: dict[OrbitId, float] = defaultdict(float)
        weights = rng.dirichlet(np.ones(3))
        for w in weights:
            code = _random_code(q, n, rng, int(rng.integers(1, max(2, q ** n // 3))))
            for o, v in orbit_average(code, q).items():
                z[o] += w * float(v)
        if kind == 0:
            yield "code", dict(z)
            continue
        eps = float(10.0 ** rng.uniform(-4, -1))
        if kind == 1:
            for o in orbits:
                z[o] += eps * float(rng.normal())
            yield "perturbed", dict(z)
        elif kind == 2:
            z[z0] += eps
            yield "shift-z0", dict(z)
        else:
            o = orbits[int(rng.integers(len(orbits)))]
            z[o] -= eps
            yield "dent", dict(z)


def _relative_min_eig(M: np.ndarray) -> float:
    scale = max(1.0, float(np.abs(M).max(initial=0.0)))
    return min_eigenvalue(M) / scale


def reduction_soundness(q: int, n: int, trials: int = 50, seed: int = 0, tol: float = PSD_TOL,
                        cap: int = SOUNDNESS_CAP, with_cosine: bool | None = None) -> Report:
    """PSD status of the unreduced matrices equals the conjunction over reduced blocks,
    separately for D = {0} and D = empty."""
    _cap(q, n, cap)
    if with_cosine is None:
        with_cosine = q <= 7
    rep = Report(f"reduction soundness q={q} n={n} trials={trials}")
    rng = np.random.default_rng(seed)
    d1 = build_blocks_D1(q, n, 1, Metric.LEE)
    de = build_blocks_Dempty(q, n, 1, Metric.LEE, EmptyRoute.INTEGER)
    dc = build_blocks_Dempty(q, n, 1, Metric.LEE, EmptyRoute.COSINE) if with_cosine else None
    tally = Counter()
    skipped = 0
    for kind, z in random_assignments(q, n, trials, rng):
        for d_size, blocks, name in ((1, d1, "D1"), (0, de, "empty"), (0, dc, "cosine")):
            if blocks is None:
                continue
            big = _relative_min_eig(explicit_moment_matrix(q, n, d_size, z, cap))
            small = min(_relative_min_eig(b.evaluate(z)) for b in blocks)
            status = big >= -tol
            if status != (small >= -tol) and max(abs(big), abs(small)) < 1e-6:
                # both within rounding of the boundary
                skipped += 1
                continue
            rep.checked += 1
            tally[(name, status)] += 1
            if status != (small >= -tol):
                rep.fail(f"{name} {kind}: unreduced min eig {big:.3e}, reduced min eig {small:.3e}")
    rep.notes.append("psd/non-psd: " + ", ".join(f"{k[0]} {'psd' if k[1] else 'not'}={v}"
                                                for k, v in sorted(tally.items())))
    if skipped:
        rep.notes.append(f"{skipped} comparisons within rounding of the boundary skipped")
    return rep


def selfcheck(q: int, n: int, trials: int = 50, seed: int = 0) -> list[Report]:
    reports = [
        check_block_coefficients(q, n, "d1"),
        check_block_coefficients(q, n, "empty-integer"),
        isotypical_orthogonality(q, n),
    ]
    if q in (2, 3, 4, 6):
        reports.append(check_block_coefficients(q, n, "cosine"))
    if q ** n <= SOUNDNESS_CAP:
        reports.append(reduction_soundness(q, n, trials, seed))
    for metric in Metric:
        for d in (2, 3):
            reports.append(feasibility_transfer(q, n, d, metric, _transfer_code(q, n, d, metric)))
    return reports


def _transfer_code(q, n, d, metric):
    # any code is a feasible point; optimal ones only where the oracle is instant
    if q ** n <= 100:
        return brute_force_optimum(q, n, d, metric)[1]
    return _local_search(q, n, d, metric, q ** n, iters=200)


def report_text(reports: Sequence[Report]) -> str:
    return "\n".join(r.text() for r in reports)
