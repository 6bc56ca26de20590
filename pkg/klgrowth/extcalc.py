"""
Ext dimensions between simple, standard and costandard modules, and the
growth statistics built from them.

Everything is indexed by W+ elements of a KLTable:

    dim Ext^n(L(x), nabla(z)) = coefficient of t^(l(x)-l(z)-n) in P_{z,x}
    dim Ext^n(L(x), L(y))     = sum over z in W+ and a + b = n of
                                dim Ext^a(L(x), nabla(z)) * dim Ext^b(L(y), nabla(z))

Sums over y are truncated at a length bound L. A truncated statistic is
flagged stabilized when it does not change at L+1 and L+2, which needs a table
built to at least L+2.
"""

from __future__ import annotations

import weakref
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from klgrowth.errors import DomainError, TruncationError
from klgrowth.klcore import KLTable, LaurentFreePoly, t_coefficient
from klgrowth.rootsys import Weight, dot_action, smallest_valid_l
from klgrowth.weylaff import enumerate_wplus, word_of

MIN_FIT_POINTS = 4


@dataclass(frozen=True)
class TruncatedStat:
    value: int | tuple[int, ...]
    truncation_L: int
    stabilized: bool


@dataclass(frozen=True)
class GrowthSequence:
    terms: tuple[int, ...]
    estimated_gamma: float | None
    window: tuple[int, int]
    truncation_L: int | None = None
    stabilized: tuple[bool, ...] = ()


@dataclass(frozen=True)
class MuRowSums:
    rows: dict[int, TruncatedStat] = field(default_factory=dict)
    r_estimate: TruncatedStat | None = None
    rprime_estimate: TruncatedStat | None = None


# -- per-table context --------------------------------------------------------


class _ExtContext:
    """W+ links of a fully built KLTable: who lies below whom, and mu between them."""

    def __init__(self, kl: KLTable):
        kl.build_all()
        self.table = kl.table
        self.lengths = kl.table.lengths
        self.wplus = enumerate_wplus(kl.table)
        self.wplus_set = set(self.wplus)
        self.below: dict[int, list[tuple[int, LaurentFreePoly]]] = {x: [] for x in self.wplus}
        self.above: dict[int, list[tuple[int, LaurentFreePoly]]] = {x: [] for x in self.wplus}
        links: dict[int, list[tuple[int, int]]] = {x: [] for x in self.wplus}
        for x in self.wplus:
            for z, p in sorted(kl.column(x).items()):
                if z not in self.wplus_set:
                    continue
                self.below[x].append((z, p))
                self.above[z].append((x, p))
                d = self.lengths[x] - self.lengths[z]
                m = t_coefficient(p, d - 1) if d > 0 else 0
                if m:
                    links[x].append((z, m))
                    links[z].append((x, m))
        self.mu_links = {x: sorted(v) for x, v in links.items()}
        self.rows: dict[int, dict[tuple[int, int], int]] = {}
        self.weights: dict[int, Weight] = {}
        self.l = smallest_valid_l(kl.table.rs)

    def require_wplus(self, *elements: int) -> None:
        for x in elements:
            self.table.check_index(x)
            if x not in self.wplus_set:
                raise DomainError(f"{word_of(self.table, x)} is not in W+")

    def row(self, x: int) -> dict[tuple[int, int], int]:
        cached = self.rows.get(x)
        if cached is not None:
            return cached
        acc: dict[tuple[int, int], int] = defaultdict(int)
        lx = self.lengths[x]
        # Ext^n(L(x), L(y)) = sum over z in W+ below both of
        # dim Ext(L(x), nabla(z)) * dim Ext(Delta(z), L(y))
        for z, p_zx in self.below[x]:
            lz = self.lengths[z]
            for y, p_zy in self.above[z]:
                ly = self.lengths[y]
                # q^k in P_{z,x} sits in degree l(x)-l(z)-2k, likewise for y
                for k, a in p_zx.terms:
                    for j, b in p_zy.terms:
                        acc[(y, (lx - lz - 2 * k) + (ly - lz - 2 * j))] += a * b
        row = dict(sorted(acc.items()))
        self.rows[x] = row
        return row

    def weight(self, x: int) -> Weight:
        w = self.weights.get(x)
        if w is None:
            rs = self.table.rs
            lam_minus = rs.rho.scaled(-2)
            w = dot_action(rs, self.table.elements[x], lam_minus, self.l)
            self.weights[x] = w
        return w

    def precedes(self, a: int, b: int) -> bool:
        """weight(a) < weight(b): the difference is a nonzero N-combination of simple roots."""
        diff = self.table.rs.to_root_coords(self.weight(b) - self.weight(a))
        return all(c.denominator == 1 and c >= 0 for c in diff) and any(diff)


_CONTEXTS: weakref.WeakKeyDictionary[KLTable, _ExtContext] = weakref.WeakKeyDictionary()


def _context(kl: KLTable) -> _ExtContext:
    ctx = _CONTEXTS.get(kl)
    if ctx is None:
        ctx = _ExtContext(kl)
        _CONTEXTS[kl] = ctx
    return ctx


def _truncated(kl: KLTable, L: int, evaluate: Callable[[int], int]) -> TruncatedStat:
    if L > kl.max_length:
        raise TruncationError(f"window L={L} exceeds the table bound {kl.max_length}")
    value = evaluate(L)
    if L + 2 > kl.max_length:
        return TruncatedStat(value, L, False)
    return TruncatedStat(value, L, all(evaluate(w) == value for w in (L + 1, L + 2)))


def _check_degree(n: int) -> None:
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")


# -- Ext dimensions -----------------------------------------------------------


def wplus_elements(kl: KLTable) -> list[int]:
    return list(_context(kl).wplus)


def weight_of(kl: KLTable, x: int) -> Weight:
    """x . lambda^- with lambda^- = -2 rho and the smallest valid l above h."""
    ctx = _context(kl)
    kl.table.check_index(x)
    return ctx.weight(x)


def ext_L_nabla(kl: KLTable, x: int, z: int, n: int) -> int:
    ctx = _context(kl)
    ctx.require_wplus(x, z)
    _check_degree(n)
    p = kl.column(x).get(z)
    if p is None:
        return 0
    return t_coefficient(p, ctx.lengths[x] - ctx.lengths[z] - n)


def ext_row(kl: KLTable, x: int) -> dict[tuple[int, int], int]:
    """All nonzero dim Ext^n(L(x), L(y)) keyed by (y, n)."""
    ctx = _context(kl)
    ctx.require_wplus(x)
    return ctx.row(x)


def ext_L_L(kl: KLTable, x: int, y: int, n: int) -> int:
    ctx = _context(kl)
    ctx.require_wplus(x, y)
    _check_degree(n)
    return ctx.row(x).get((y, n), 0)


def a1_region(X: int, Y: int, n: int) -> bool:
    """Closed-form support of Ext^n between A1 simples of lengths X and Y."""
    if X < 1 or Y < 1:
        raise DomainError(f"W+ lengths start at 1, got X={X}, Y={Y}")
    return abs(X - Y) <= n <= X + Y - 2 and (X + Y - n) % 2 == 0


# -- truncated statistics -----------------------------------------------------


def sum_over_nu(kl: KLTable, x: int, n: int, L: int) -> TruncatedStat:
    ctx = _context(kl)
    ctx.require_wplus(x)
    _check_degree(n)
    if L < ctx.lengths[x] + n:
        raise TruncationError(f"L={L} is below l(x)+n={ctx.lengths[x] + n}")
    row = ctx.row(x)

    def evaluate(window: int) -> int:
        return sum(dim for (y, m), dim in row.items() if m == n and ctx.lengths[y] <= window)

    return _truncated(kl, L, evaluate)


def c_n_max(kl: KLTable, n: int, L: int) -> TruncatedStat:
    """max over W+ pairs of the coefficient of t^(l(x)-l(y)-n) in P_{y,x}."""
    ctx = _context(kl)
    _check_degree(n)

    def evaluate(window: int) -> int:
        best = 0
        for x in ctx.wplus:
            lx = ctx.lengths[x]
            if lx > window:
                break
            for z, p in ctx.below[x]:
                best = max(best, t_coefficient(p, lx - ctx.lengths[z] - n))
        return best

    return _truncated(kl, L, evaluate)


def _default_window(N: int) -> tuple[int, int]:
    return (max(1, N // 4), N)


def cx_sequences(
    kl: KLTable, N: int, L: int, window: tuple[int, int] | None = None
) -> tuple[GrowthSequence, GrowthSequence]:
    """Max and summed Ext^n sequences for n = 0..N, truncated at L."""
    ctx = _context(kl)
    if not ctx.wplus or L < N + ctx.lengths[ctx.wplus[0]]:
        raise TruncationError(f"L={L} is too small for degrees up to {N}")
    window = window or _default_window(N)

    def max_term(n: int) -> Callable[[int], int]:
        def evaluate(bound: int) -> int:
            best = 0
            for x in ctx.wplus:
                if ctx.lengths[x] > bound - n:
                    break
                for (y, m), dim in ctx.row(x).items():
                    if m == n and ctx.lengths[y] <= bound - n:
                        best = max(best, dim)
            return best

        return evaluate

    def sum_term(n: int) -> Callable[[int], int]:
        def evaluate(bound: int) -> int:
            best = 0
            for x in ctx.wplus:
                if ctx.lengths[x] > bound - n:
                    break
                total = sum(
                    dim for (y, m), dim in ctx.row(x).items() if m == n and ctx.lengths[y] <= bound
                )
                best = max(best, total)
            return best

        return evaluate

    sequences = []
    for term in (max_term, sum_term):
        stats = [_truncated(kl, L, term(n)) for n in range(N + 1)]
        terms = tuple(stat.value for stat in stats)
        sequences.append(
            GrowthSequence(
                terms=terms,
                estimated_gamma=estimate_gamma(terms, window),
                window=window,
                truncation_L=L,
                stabilized=tuple(stat.stabilized for stat in stats),
            )
        )
    return sequences[0], sequences[1]


def estimate_gamma(terms: Sequence[int], window: tuple[int, int] | None = None) -> float | None:
    """Least-squares slope of log s_n against log n, plus one.

    A heuristic for the growth rate, not a certified bound. Returns None when
    the window holds fewer than four positive terms.
    """
    lo, hi = window or _default_window(len(terms) - 1)
    points = [(n, terms[n]) for n in range(max(lo, 1), min(hi, len(terms) - 1) + 1) if terms[n] > 0]
    if len(points) < MIN_FIT_POINTS:
        return None
    ns = np.log(np.array([n for n, _ in points], dtype=float))
    values = np.log(np.array([float(s) for _, s in points]))
    slope = np.polyfit(ns, values, 1)[0]
    return float(slope) + 1.0


def zigzag_bound(kl: KLTable, x: int, n: int, L: int) -> TruncatedStat:
    """Sum of mu-products over W+ chains that first descend, then ascend in weight."""
    ctx = _context(kl)
    ctx.require_wplus(x)
    _check_degree(n)
    if L < ctx.lengths[x] + n + 2:
        raise TruncationError(f"L={L} is below l(x)+n+2={ctx.lengths[x] + n + 2}")

    def evaluate(window: int) -> int:
        # weighted chain counts ending at each element; a chain in "up" never turns down again
        down: dict[int, int] = {x: 1}
        up: dict[int, int] = {}
        for _ in range(n):
            next_down: dict[int, int] = defaultdict(int)
            next_up: dict[int, int] = defaultdict(int)
            for a, count in down.items():
                for b, m in ctx.mu_links[a]:
                    if ctx.lengths[b] > window:
                        continue
                    # links between incomparable weights are dropped
                    if ctx.precedes(b, a):
                        next_down[b] += count * m
                    elif ctx.precedes(a, b):
                        next_up[b] += count * m
            for a, count in up.items():
                for b, m in ctx.mu_links[a]:
                    if ctx.lengths[b] <= window and ctx.precedes(a, b):
                        next_up[b] += count * m
            down, up = next_down, next_up
        # chains that never turned count too
        return sum(down.values()) + sum(up.values())

    return _truncated(kl, L, evaluate)


def mu_row_sums(kl: KLTable, L: int) -> MuRowSums:
    """Per-row sums of mu over W+, with the R and R' estimates."""
    ctx = _context(kl)
    if L > kl.max_length:
        raise TruncationError(f"window L={L} exceeds the table bound {kl.max_length}")
    members = [x for x in ctx.wplus if ctx.lengths[x] <= L]
    if not members:
        return MuRowSums()

    def row_sum(x: int, window: int) -> int:
        return sum(m for y, m in ctx.mu_links[x] if ctx.lengths[y] <= window)

    rows = {x: _truncated(kl, L, lambda w, x=x: row_sum(x, w)) for x in members}

    def row_max(window: int) -> int:
        return max(row_sum(x, window) for x in ctx.wplus if ctx.lengths[x] <= window)

    return MuRowSums(
        rows=rows,
        r_estimate=_truncated(kl, L, row_max),
        rprime_estimate=rows[members[0]],
    )
