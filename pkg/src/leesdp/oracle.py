"""Exact maximum codes at tiny scale.

The code is cut into ``q`` slices along the last coordinate; slice ``i`` is a
code in Z_q^{n-1}. Slices at circular offset ``delta`` interact through the
residual distance ``d - delta`` (Lee) or not at all once ``delta >= d``
(Lee-inf). Two neighbouring slices together always form a code of distance
``d - 1`` (Lee) or ``d`` (Lee-inf) in Z_q^{n-1}; call this the pair graph.

Symmetry reduction: rotate/reflect the last coordinate so that the pair of
slices 0, 1 has the largest union ``U0``; then every other pair is at most
``|U0|`` and a code of size ``t`` needs ``|U0| >= ceil(2t/q)``. When the
incumbent is close to ``q |U0| / 2`` most pairs must be full, and the rotation
is chosen so that a run of full pairs starts at slice 0. Automorphisms of
Z_q^{n-1} act on all slices at once, so ``U0`` runs over orbit representatives
only. The remaining slices are searched depth first, bounded by a path DP
whose pair caps are exact maxima on unions of available regions.

The search starts from a local-search incumbent, so for most instances it
only has to refute one size above the optimum. Instances with at most
WHOLE_GRAPH_LIMIT words skip the slicing and run a plain clique search.
"""

from __future__ import annotations

import itertools
import math
import random

import numpy as np

from .lee import Metric, check_word, circular_distance, min_distance

DEFAULT_CAP = 2500
# largest symmetry group used for the orbit reduction of U0
GROUP_LIMIT = 50000
# up to this many words a clique search on the whole graph beats slicing
WHOLE_GRAPH_LIMIT = 150


class OracleCapExceeded(ValueError):
    pass


def _bits(P: int):
    while P:
        low = P & -P
        yield low.bit_length() - 1
        P ^= low


def _color_order(P: int, adj: list[int]):
    """Greedy coloring; vertices in color order with running color counts."""
    order, bounds = [], []
    color = 0
    U = P
    while U:
        color += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~low
            Q &= ~adj[v]
            U &= ~low
            order.append(v)
            bounds.append(color)
    return order, bounds


class _Clique:
    """Maximum clique in a compatibility graph given as bitmasks, memoized per subset."""

    def __init__(self, adj: list[int]):
        self.adj = adj
        self.memo: dict[int, int] = {}

    def value(self, P: int) -> int:
        r = self.memo.get(P)
        if r is None:
            r = self._solve(P)
            self.memo[P] = r
        return r

    def _solve(self, P: int) -> int:
        return self.witness(P).bit_count()

    def witness(self, P: int, lower: int = 0) -> int:
        """A maximum clique inside ``P`` as a bitmask; 0 if none beats ``lower``."""
        adj = self.adj
        best, best_set = lower, 0

        def expand(S, size, P):
            nonlocal best, best_set
            order, bounds = _color_order(P, adj)
            for k in range(len(order) - 1, -1, -1):
                if size + bounds[k] <= best:
                    return
                v = order[k]
                P2 = P & adj[v]
                if P2:
                    expand(S | (1 << v), size + 1, P2)
                elif size + 1 > best:
                    best, best_set = size + 1, S | (1 << v)
                P &= ~(1 << v)

        expand(0, 0, P)
        return best_set

    def cliques_of_size(self, P: int, s: int):
        """All cliques with exactly ``s`` vertices inside ``P``, as bitmasks."""
        adj = self.adj

        def rec(S, size, P):
            if size == s:
                yield S
                return
            order, bounds = _color_order(P, adj)
            for k in range(len(order) - 1, -1, -1):
                if size + bounds[k] < s:
                    return
                v = order[k]
                yield from rec(S | (1 << v), size + 1, P & adj[v])
                P &= ~(1 << v)

        yield from rec(0, 0, P)


def _sub_distance(u, v, q, metric):
    if not u:
        return 0
    c = [circular_distance(a, b, q) for a, b in zip(u, v)]
    return max(c) if metric is Metric.LEE_INF else sum(c)


def _isometries(q: int, m: int, words: list[tuple[int, ...]]) -> np.ndarray:
    """Permutation table of D_q^m ⋊ S_m on Z_q^m (or a subgroup if that is too large)."""
    index = {w: i for i, w in enumerate(words)}
    maps = [tuple(range(q))]
    if 2 * q <= GROUP_LIMIT:
        maps = [tuple((s + e * x) % q for x in range(q)) for s in range(q) for e in (1, -1)]
    if len(maps) ** m * math.factorial(m) <= GROUP_LIMIT:
        perms = list(itertools.permutations(range(m)))
    else:
        perms = [tuple(range(m))]
    if len(maps) ** m * len(perms) > GROUP_LIMIT:
        maps = [tuple(range(q))]
    W = np.array(words, dtype=np.int64).reshape(len(words), m)
    out = []
    for p in perms:
        Wp = W[:, list(p)]
        for fs in itertools.product(maps, repeat=m):
            img = np.empty_like(Wp)
            for k, f in enumerate(fs):
                img[:, k] = np.asarray(f)[Wp[:, k]]
            out.append([index[tuple(r)] for r in img.tolist()])
    return np.array(out, dtype=np.int64)


class _SliceSearch:
    def __init__(self, q: int, n: int, d: int, metric: Metric):
        self.q, self.n, self.d, self.metric = q, n, d, metric
        self.rest = list(itertools.product(range(q), repeat=n - 1))
        M = len(self.rest)
        self.full = (1 << M) - 1
        dist = [[_sub_distance(u, v, q, metric) for v in self.rest] for u in self.rest]

        def masks(need):
            return [sum(1 << j for j in range(M) if need <= 0 or dist[i][j] >= need) for i in range(M)]

        # compat[delta][r]: rest vectors allowed in a slice at offset delta from a slice holding r
        self.compat = []
        for delta in range(q // 2 + 1):
            if metric is Metric.LEE_INF:
                need = d if delta < d else 0
            else:
                need = d - delta
            self.compat.append(masks(need))
        # offsets whose compatibility actually removes something
        self.active = [delta for delta in range(1, q // 2 + 1)
                       if any(m != self.full for m in self.compat[delta])]
        self.inner = _Clique(self.compat[0])
        self.pair = _Clique(masks(d if metric is Metric.LEE_INF else d - 1))
        self.group = _isometries(q, n - 1, self.rest) if n > 1 else np.zeros((1, 1), dtype=np.int64)
        self.best = 0
        self.witness: list[int] = []
        self.nodes = 0
        self.forced = 1
        self.u0_key = ()
        self.keys: dict[int, tuple] = {}

    def offset(self, i, j):
        t = abs(i - j) % self.q
        return min(t, self.q - t)

    def restrict(self, A, i, S):
        out = list(A)
        if not S:
            return out
        # one AND per nontrivial offset, shared by both slices at that offset
        masks = {}
        for delta in self.active:
            row = self.compat[delta]
            m = self.full
            for r in _bits(S):
                m &= row[r]
            masks[delta] = m
        for j in range(self.q):
            if j != i and out[j]:
                m = masks.get(self.offset(i, j))
                if m is not None:
                    out[j] &= m
        return out

    def path_bound(self, A, lo, hi, p, limits):
        """Max of sum s_j over the open run lo..hi under slice and pair caps.

        ``limits`` maps a slice to an extra (min, max) window on its size.
        Returns -1 when the windows cannot be met.
        """
        if lo > hi:
            return 0
        NEG = -10**9
        if hi - lo <= 1:
            # one or two slices: the DP below has a closed form
            inner = self.inner.value
            tops, lows = [], []
            for j in (lo, hi) if hi > lo else (lo,):
                low, cap = limits.get(j, (0, p))
                top = min(p, cap, inner(A[j]))
                if low > top:
                    return -1
                tops.append(top)
                lows.append(low)
            if hi == lo:
                return tops[0]
            pc = min(p, self.pair.value(A[lo] | A[hi]))
            if lows[0] + lows[1] > pc:
                return -1
            return min(tops[0] + tops[1], pc)

        def window(j):
            top = min(p, self.inner.value(A[j]))
            low = 0
            if j in limits:
                low, cap = limits[j]
                top = min(top, cap)
            return low, top

        low, top = window(lo)
        if low > top:
            return -1
        prev = [s if s >= low else NEG for s in range(top + 1)]
        for j in range(lo + 1, hi + 1):
            cap = min(p, self.pair.value(A[j - 1] | A[j]))
            low, top = window(j)
            pref = list(itertools.accumulate(prev, max))
            cur = []
            for s in range(top + 1):
                t = min(len(pref) - 1, cap - s)
                if t < 0:
                    break
                cur.append(pref[t] + s if s >= low else NEG)
            if not cur or max(cur) < 0:
                return -1
            prev = cur
        best = max(prev)
        return best if best >= 0 else -1

    def canonical(self, S: int) -> tuple:
        idx = np.fromiter(_bits(S), dtype=np.int64)
        imgs = np.sort(self.group[:, idx], axis=1)
        order = np.lexsort(imgs.T[::-1])
        return tuple(imgs[order[0]].tolist())

    def upper_bound(self) -> int:
        """Every slice is a code one dimension down and adjacent pairs obey the pair cap."""
        P = self.pair.value(self.full)
        ub = self.q * self.inner.value(self.full)
        return min(ub, P if self.q == 2 else self.q * P // 2)

    def run(self):
        q = self.q
        for s in range(self.pair.value(self.full), 0, -1):
            if s < math.ceil(2 * (self.best + 1) / q):
                break
            reps = {}
            self.keys = {}
            for U in self.pair.cliques_of_size(self.full, s):
                key = self.keys[U] = self.canonical(U)
                if key not in reps:
                    reps[key] = sum(1 << v for v in key)
            for U in sorted(reps.values()):
                self._split(U, s)
        return self.best, self.witness

    def forced_run(self, p: int) -> int:
        """Length r of a run of adjacent slice pairs whose union has size exactly p.

        Pairs around the cycle count every slice twice, so a code beating the
        incumbent has total deficit sum(p - |U_i|) <= D = q p - 2 (best + 1).
        At most D pairs fall short, which leaves a run of at least
        ceil((q - b) / b) full pairs for b = min(D, q); a rotation moves it to
        the front.
        """
        q = self.q
        if q < 3:
            return 1
        D = q * p - 2 * (self.best + 1)
        b = min(D, q)
        if b <= 0:
            return q
        return max(1, -(-(q - b) // b))

    def _split(self, U, p):
        q = self.q
        members = list(_bits(U))
        adj = self.compat[0]
        self.forced = self.forced_run(p)
        self.u0_key = self.canonical(U)
        for choice in itertools.product((0, 1), repeat=len(members)):
            S0 = sum(1 << v for v, c in zip(members, choice) if c)
            S1 = U & ~S0
            if self.forced in (1, q) and S0 < S1:
                # reflection x -> 1 - x swaps slices 0 and 1
                continue
            if not (all(S0 & ~adj[v] & ~(1 << v) == 0 for v in _bits(S0))
                    and all(S1 & ~adj[v] & ~(1 << v) == 0 for v in _bits(S1))):
                continue
            A = self.restrict(self.restrict([self.full] * q, 0, S0), 1, S1)
            sol = [None] * q
            sol[0], sol[1] = S0, S1
            self._run(2, q - 1, A, S0.bit_count() + S1.bit_count(), sol, p)

    def _finish(self, sol, total):
        if total > self.best:
            self.best = total
            self.witness = list(sol)

    def _size(self, sol, j):
        return sol[j % self.q].bit_count()

    def _run(self, lo, hi, A, total, sol, p):
        """Fill the open run of slices lo..hi; its outer neighbours are fixed."""
        self.nodes += 1
        if lo > hi:
            self._finish(sol, total)
            return
        if lo == self.forced + 1 and 2 <= self.forced < self.q:
            # reversing the forced run puts U_{r-1} first; that orientation is
            # searched under its own representative when its key is smaller
            last = sol[lo - 2] | sol[lo - 1]
            key = self.keys.get(last)
            if key is None:
                key = self.canonical(last)
            if key < self.u0_key:
                return
        left, right = self._size(sol, lo - 1), self._size(sol, hi + 1)
        ends = {lo: (0, p - left)}
        ends[hi] = (0, min(p - right, ends.get(hi, (0, p))[1]))
        if lo <= self.forced:
            ends[lo] = (p - left, ends[lo][1])
        bound = self.path_bound(A, lo, hi, p, ends)
        if bound < 0 or total + bound <= self.best:
            return
        if lo == hi:
            # last slice: an exact maximum, no enumeration
            S = self.inner.witness(A[lo])
            sol[lo] = S
            self._finish(sol, total + S.bit_count())
            sol[lo] = None
            return
        # inside the forced run the size is p minus the left neighbour;
        # otherwise fill the more constrained end first
        if lo <= self.forced:
            i, nlo, nhi = lo, lo + 1, hi
        elif self.inner.value(A[hi]) < self.inner.value(A[lo]):
            i, nlo, nhi = hi, lo, hi - 1
        else:
            i, nlo, nhi = lo, lo + 1, hi
        first_low, first_cap = ends.get(i, (0, p))
        adj = self.compat[0]

        def fixed(k):
            lim = dict(ends)
            lim[i] = (k, k)
            return lim

        # slice sizes that can still beat the incumbent
        sizes = range(first_low, first_cap + 1)
        allowed = [k for k in sizes if total + self.path_bound(A, lo, hi, p, fixed(k)) > self.best]
        if not allowed:
            return
        kmin, kmax = allowed[0], allowed[-1]
        ok = set(allowed)
        # the neighbour inside the run loses room as slice i grows
        inner_nb = i + 1 if i == lo else i - 1

        def commit(S, size):
            B = self.restrict(A, i, S)
            lim = {j: w for j, w in ends.items() if nlo <= j <= nhi}
            w = lim.get(inner_nb, (0, p))
            lim[inner_nb] = (w[0], min(w[1], p - size))
            rest = self.path_bound(B, nlo, nhi, p, lim)
            if rest < 0 or total + size + rest <= self.best:
                return
            sol[i] = S
            self._run(nlo, nhi, B, total + size, sol, p)
            sol[i] = None

        def enum(S, cand, size):
            if size < kmax and cand:
                if kmin - size > 2:
                    order, bounds = _color_order(cand, adj)
                    for k in range(len(order) - 1, -1, -1):
                        if size + bounds[k] < kmin:
                            break
                        v = order[k]
                        enum(S | (1 << v), cand & adj[v], size + 1)
                        cand &= ~(1 << v)
                else:
                    # close to the minimum size a popcount bound is cheaper
                    while cand and size + cand.bit_count() >= kmin:
                        low = cand & -cand
                        v = low.bit_length() - 1
                        enum(S | low, cand & adj[v], size + 1)
                        cand ^= low
            if size in ok:
                commit(S, size)

        enum(0, A[i], 0)

    def words(self):
        out = []
        for i, S in enumerate(self.witness):
            for r in _bits(S or 0):
                out.append(self.rest[r] + (i,))
        return sorted(out)


def _conflict_lists(q: int, n: int, d: int, metric: Metric):
    W = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64)
    t = np.abs(W[:, None, :] - W[None, :, :]) % q
    t = np.minimum(t, q - t)
    dist = t.sum(axis=2) if metric is Metric.LEE else t.max(axis=2)
    close = dist < d
    np.fill_diagonal(close, False)
    return [tuple(map(int, w)) for w in W], [np.flatnonzero(row).tolist() for row in close]


def _local_search(q: int, n: int, d: int, metric: Metric, target: int,
                  iters: int = 3000, seed: int = 1) -> list[tuple[int, ...]]:
    """Iterated local search for a large code; only used to seed the exact search.

    Moves: greedy fill, (1,2)-swaps through vertices with exactly one conflict,
    and a perturbation that forces in a random outside word.
    """
    words, nb = _conflict_lists(q, n, d, metric)
    N = len(words)
    rng = random.Random(seed)
    nbs = [set(x) for x in nb]
    tight = [0] * N
    inS = [False] * N
    S: set[int] = set()

    def add(v):
        inS[v] = True
        S.add(v)
        for u in nb[v]:
            tight[u] += 1

    def rem(v):
        inS[v] = False
        S.discard(v)
        for u in nb[v]:
            tight[u] -= 1

    def fill():
        free = [v for v in range(N) if not inS[v] and tight[v] == 0]
        rng.shuffle(free)
        for v in free:
            if tight[v] == 0 and not inS[v]:
                add(v)

    def swap_once():
        for x in sorted(S):
            cand = [u for u in nb[x] if tight[u] == 1]
            if len(cand) < 2:
                continue
            rng.shuffle(cand)
            for a, b in itertools.combinations(cand, 2):
                if b not in nbs[a]:
                    rem(x)
                    add(a)
                    add(b)
                    fill()
                    return True
        return False

    fill()
    while swap_once():
        pass
    best = set(S)
    for _ in range(iters):
        if len(best) >= target or len(S) == N:
            break
        v = rng.choice([u for u in range(N) if not inS[u]])
        for u in nb[v]:
            if inS[u]:
                rem(u)
        add(v)
        fill()
        while swap_once():
            pass
        if len(S) > len(best):
            best = set(S)
        elif len(S) < len(best) - 1 or (len(S) < len(best) and rng.random() < 0.5):
            for u in list(S):
                rem(u)
            for u in best:
                add(u)
    return sorted(words[v] for v in best)


def _whole_graph(q, n, d, metric, lower):
    """Plain maximum clique; translations are isometries, so the zero word is in some optimum."""
    words, nb = _conflict_lists(q, n, d, metric)
    N = len(words)
    full = (1 << N) - 1
    adj = [full & ~(1 << i) & ~sum(1 << j for j in nb[i]) for i in range(N)]
    S = _Clique(adj).witness(adj[0], lower - 1)
    if not S:
        return None
    return sorted(words[v] for v in _bits(S | 1))


def brute_force_optimum(q: int, n: int, d: int, metric: Metric | str = Metric.LEE,
                        cap: int = DEFAULT_CAP) -> tuple[int, list[tuple[int, ...]]]:
    """Largest code in Z_q^n with minimum distance >= d, and one such code."""
    metric = Metric.parse(metric)
    if q < 2 or n < 1 or d < 1:
        raise ValueError("need q >= 2, n >= 1, d >= 1")
    if q ** n > cap:
        raise OracleCapExceeded(f"q^n = {q ** n} exceeds the oracle cap {cap}")
    if d == 1:
        return q ** n, list(itertools.product(range(q), repeat=n))
    diameter = q // 2 * (n if metric is Metric.LEE else 1)
    if d > diameter:
        return 1, [(0,) * n]
    search = _SliceSearch(q, n, d, metric)
    ub = search.upper_bound()
    seed = _local_search(q, n, d, metric, ub)
    if len(seed) >= ub:
        words = seed
    elif q ** n <= WHOLE_GRAPH_LIMIT:
        words = _whole_graph(q, n, d, metric, len(seed)) or seed
    else:
        search.best = len(seed)
        search.run()
        words = search.words() if search.witness else seed
    if min_distance(words, q, metric) < d:
        raise AssertionError("oracle produced an invalid code")
    return len(words), words


def alpha_circular_power(d: int, q: int, n: int, cap: int = DEFAULT_CAP) -> int:
    """Independence number of the n-th strong power of the circular graph C_{d,q}."""
    return brute_force_optimum(q, n, d, Metric.LEE_INF, cap)[0]


def is_code(words, q: int, n: int, d: int, metric: Metric) -> bool:
    ws = [check_word(w, q, n) for w in words]
    return len(set(ws)) == len(ws) and min_distance(ws, q, metric) >= d
