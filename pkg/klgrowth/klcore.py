"""
Kazhdan-Lusztig polynomials over a GroupTable.

Columns are stored as x -> {y: P_{y,x}} and filled by the standard recursion
on a left descent s of x (v = s x, c = 1 when s y < y):

    P_{y,x} = q^(1-c) P_{sy,v} + q^c P_{y,v}
              - sum_{z < v, sz < z} mu(z, v) q^((l(x)-l(z))/2) P_{y,z}

Columns are computed lazily on demand, or all at once by `build_all`, one
length stratum at a time (a stratum only reads shorter columns, so it can be
spread over a thread pool).
"""

from __future__ import annotations

import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Mapping

from klgrowth.errors import DomainError, PositivityError
from klgrowth.weylaff import GroupTable, parse_word, word_of

CACHE_VERSION = 1
CACHE_MAGIC = "# klgrowth kl-cache"


@dataclass(frozen=True)
class LaurentFreePoly:
    """Sparse integer polynomial; exponents may be negative.

    `terms` holds (exponent, coefficient) pairs, ascending, without zeros.
    """

    terms: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, int]) -> LaurentFreePoly:
        return cls(tuple(sorted((e, c) for e, c in coeffs.items() if c)))

    @classmethod
    def from_coefficients(cls, coefficients: list[int]) -> LaurentFreePoly:
        return cls.from_dict(dict(enumerate(coefficients)))

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> LaurentFreePoly:
        return cls.from_dict({exponent: coefficient})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self.terms)

    def coeff(self, exponent: int) -> int:
        for e, c in self.terms:
            if e == exponent:
                return c
        return 0

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    def coefficients(self) -> list[int]:
        """Dense ascending coefficient list from exponent 0 (zero polynomial -> [0])."""
        if not self.terms:
            return [0]
        if self.terms[0][0] < 0:
            raise DomainError(f"{self} has negative exponents")
        dense = [0] * (self.degree + 1)
        for e, c in self.terms:
            dense[e] = c
        return dense

    def has_negative_coefficient(self) -> bool:
        return any(c < 0 for _, c in self.terms)

    def shift(self, k: int) -> LaurentFreePoly:
        return LaurentFreePoly(tuple((e + k, c) for e, c in self.terms))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: LaurentFreePoly) -> LaurentFreePoly:
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return LaurentFreePoly.from_dict(acc)

    def __neg__(self) -> LaurentFreePoly:
        return LaurentFreePoly(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: LaurentFreePoly) -> LaurentFreePoly:
        return self + (-other)

    def __mul__(self, other: LaurentFreePoly | int) -> LaurentFreePoly:
        if isinstance(other, int):
            return LaurentFreePoly.from_dict({e: c * other for e, c in self.terms})
        acc: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentFreePoly.from_dict(acc)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
            else:
                power = "q" if e == 1 else f"q^{e}"
                parts.append(power if c == 1 else f"{c}{power}")
        return " + ".join(parts)


ZERO = LaurentFreePoly()
ONE = LaurentFreePoly.monomial(0)

Column = dict[int, LaurentFreePoly]


class KLTable:
    """Memoized P_{y,x} for every x in a GroupTable."""

    def __init__(self, table: GroupTable, verbose: bool = False):
        self.table = table
        self.max_length = table.max_length
        self.verbose = verbose
        self._columns: dict[int, Column] = {}
        self._mu: dict[int, tuple[tuple[int, int], ...]] = {}

    @property
    def complete(self) -> bool:
        return len(self._columns) == len(self.table)

    def column(self, x: int) -> Column:
        """{y: P_{y,x}} over all y <= x."""
        self.table.check_index(x)
        col = self._columns.get(x)
        if col is None:
            col = self._compute_column(x)
            self._store(x, col)
        return col

    def mu_below(self, v: int) -> tuple[tuple[int, int], ...]:
        """(z, mu(z, v)) for z < v with nonzero mu."""
        self.column(v)
        return self._mu[v]

    def _store(self, x: int, col: Column) -> None:
        lengths = self.table.lengths
        mus = []
        for z in sorted(col):
            d = lengths[x] - lengths[z]
            if d % 2 == 1:
                m = col[z].coeff((d - 1) // 2)
                if m:
                    mus.append((z, m))
        self._mu[x] = tuple(mus)
        self._columns[x] = col

    def _compute_column(self, x: int) -> Column:
        if x == 0:
            return {0: ONE}
        return self.column_via(x, self.table.left_descents(x)[0])

    def column_via(self, x: int, s: int) -> Column:
        """Column of x computed through the left descent s."""
        t = self.table
        if not t.is_left_descent(x, s):
            raise DomainError(f"s{s} is not a left descent of {word_of(t, x)}")
        v = t.left[x][s]
        col_v = self.column(v)
        # P_{y,x} can only be nonzero for y or sy below v
        candidates = set(col_v)
        candidates.update(t.left[y][s] for y in col_v)
        # mu terms come from z < v that also have s as a left descent
        corrections = [
            (z, m, self.column(z)) for z, m in self.mu_below(v) if t.is_left_descent(z, s)
        ]
        lx = t.lengths[x]

        col: Column = {}
        for y in sorted(candidates):
            sy = t.left[y][s]
            # c = 1 when s is also a left descent of y
            c = 1 if t.lengths[sy] < t.lengths[y] else 0
            p = ZERO
            first = col_v.get(sy)
            if first:
                p = p + first.shift(1 - c)
            second = col_v.get(y)
            if second:
                p = p + second.shift(c)
            for z, m, col_z in corrections:
                pz = col_z.get(y)
                if pz:
                    p = p - pz.shift((lx - t.lengths[z]) // 2) * m
            if p:
                if p.has_negative_coefficient():
                    raise PositivityError(
                        f"P({word_of(t, y)}, {word_of(t, x)}) = {p} has a negative coefficient"
                    )
                col[y] = p
        return col

    def build_all(self, threads: int = 1) -> KLTable:
        """Fill every column, stratum by stratum; results never depend on `threads`."""
        if self.complete:
            return self
        pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
        try:
            for length in range(self.max_length + 1):
                todo = [x for x in self.table.stratum(length) if x not in self._columns]
                if pool is not None and len(todo) > 1:
                    cols = list(pool.map(self._compute_column, todo))
                else:
                    cols = [self._compute_column(x) for x in todo]
                for x, col in zip(todo, cols):
                    self._store(x, col)
                if self.verbose:
                    print(f"🧮 KL length {length}: {len(todo)} columns", file=sys.stderr)
        finally:
            if pool is not None:
                pool.shutdown()
        return self

    def pairs(self) -> Iterator[tuple[int, int, LaurentFreePoly]]:
        """(y, x, P_{y,x}) for all nonzero entries, ordered by x then y."""
        self.build_all()
        for x in range(len(self.table)):
            col = self._columns[x]
            for y in sorted(col):
                yield y, x, col[y]


def kl_polynomial(kl: KLTable, y: int, x: int) -> LaurentFreePoly:
    """P_{y,x}; zero unless y <= x."""
    kl.table.check_index(y)
    return kl.column(x).get(y, ZERO)


def kl_polynomial_via(kl: KLTable, y: int, x: int, s: int) -> LaurentFreePoly:
    """P_{y,x} recomputed through a chosen left descent s of x."""
    kl.table.check_index(y)
    kl.table.check_index(x)
    return kl.column_via(x, s).get(y, ZERO)


def t_coefficient(poly: LaurentFreePoly, n: int) -> int:
    """Coefficient of t^n where q = t^2."""
    if n < 0 or n % 2:
        return 0
    return poly.coeff(n // 2)


def mu(kl: KLTable, a: int, b: int) -> int:
    """Coefficient of t^(d-1) in P_{lo,hi}, d the length difference; symmetric in a, b."""
    kl.table.check_index(a)
    kl.table.check_index(b)
    lengths = kl.table.lengths
    if lengths[a] == lengths[b]:
        return 0
    lo, hi = (a, b) if lengths[a] < lengths[b] else (b, a)
    d = lengths[hi] - lengths[lo]
    return t_coefficient(kl_polynomial(kl, lo, hi), d - 1)


# -- cache files --------------------------------------------------------------


def cache_header(table: GroupTable) -> list[str]:
    return [f"{CACHE_MAGIC} v{CACHE_VERSION}", f"# group {table.label}"]


def cached_bound(table: GroupTable, path: str | Path) -> int | None:
    """Length bound of a cache written for the same group and mode, else None."""
    try:
        head = Path(path).read_text(encoding="utf-8").splitlines()[:2]
    except (OSError, UnicodeDecodeError):
        return None
    magic, group = cache_header(table)
    # group line minus its bound, e.g. "# group A2 affine L="
    prefix = group[: group.rindex("=") + 1]
    if len(head) < 2 or head[0] != magic or not head[1].startswith(prefix):
        return None
    bound = head[1][len(prefix):].strip()
    return int(bound) if bound.isdigit() else None


def _word_length(word: str) -> int:
    return 0 if word == "e" else len(word.split())


def save_cache(kl: KLTable, path: str | Path) -> int:
    """Write every nonzero P_{y,x}; returns the number of entries."""
    lines = cache_header(kl.table)
    count = 0
    for y, x, p in kl.pairs():
        coeffs = ",".join(str(c) for c in p.coefficients())
        lines.append(f"{word_of(kl.table, y)} | {word_of(kl.table, x)} | {coeffs}")
        count += 1
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return count


def load_cache(table: GroupTable, path: str | Path, verbose: bool = False) -> KLTable:
    """Rebuild a KLTable from a cache of the same group written to at least the table's bound.

    Entries whose x lies beyond the table's bound are skipped, so a cache
    written by `kltable -L 12` serves every query on a shorter table.
    """
    text = Path(path).read_text(encoding="utf-8").splitlines()
    bound = cached_bound(table, path)
    if bound is None or bound < table.max_length:
        found = " / ".join(text[:2]) or "empty file"
        raise DomainError(f"cache {path} does not cover {table.label}: found {found}")

    columns: dict[int, Column] = {}
    for number, line in enumerate(text[2:], start=3):
        if not line.strip():
            continue
        parts = [part.strip() for part in line.split("|")]
        if len(parts) != 3:
            raise DomainError(f"{path}:{number}: malformed cache line")
        # words are reduced, so their letter count is the length
        if _word_length(parts[1]) > table.max_length:
            continue
        y = parse_word(table, parts[0])
        x = parse_word(table, parts[1])
        p = LaurentFreePoly.from_coefficients([int(c) for c in parts[2].split(",")])
        if p.has_negative_coefficient():
            raise PositivityError(f"{path}:{number}: negative coefficient in cached P({parts[0]}, {parts[1]})")
        columns.setdefault(x, {})[y] = p

    if len(columns) != len(table):
        raise DomainError(f"cache {path} is incomplete: {len(columns)} of {len(table)} columns")

    kl = KLTable(table, verbose=verbose)
    for x in sorted(columns):
        kl._store(x, columns[x])
    return kl
