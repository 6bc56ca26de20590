"""
Closed-form Ext dimensions for affine type A1.

W+ has exactly one element of each length X >= 1 and every KL polynomial is 1,
so dim Ext^n(L(x), L(y)) only depends on X = l(x), Y = l(y) and n. It is 1
exactly when a unique z of length (X+Y-n)/2 >= 1 exists, i.e. when
|X-Y| <= n <= X+Y-2 and X+Y = n (mod 2), and 0 otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from klgrowth.errors import DomainError, TruncationError
from klgrowth.extcalc import ext_row, wplus_elements
from klgrowth.klcore import KLTable


@dataclass(frozen=True)
class A1Query:
    X: int
    Y: int
    n: int

    def __post_init__(self):
        if self.X < 1 or self.Y < 1:
            raise DomainError(f"W+ lengths start at 1, got X={self.X}, Y={self.Y}")
        if self.n < 0:
            raise DomainError(f"degree must be nonnegative, got {self.n}")


@dataclass(frozen=True)
class A1ExtResult:
    dim: int
    a: int | None = None
    b: int | None = None
    z_length: int | None = None


@dataclass
class A1Report:
    checked: int = 0
    disagreements: list[tuple[int, int, int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def a1_ext_dim(query: A1Query) -> A1ExtResult:
    X, Y, n = query.X, query.Y, query.n
    if not abs(X - Y) <= n <= X + Y - 2 or (X + Y - n) % 2:
        return A1ExtResult(0)
    return A1ExtResult(1, a=(n + X - Y) // 2, b=(n - X + Y) // 2, z_length=(X + Y - n) // 2)


def a1_sum_row(X: int, n: int) -> int:
    """Number of Y with a one-dimensional Ext^n(L(x), L(y)); Y never exceeds X+n."""
    return sum(a1_ext_dim(A1Query(X, Y, n)).dim for Y in range(1, X + n + 1))


def verify_against_engine(kl: KLTable, xmax: int, nmax: int) -> A1Report:
    """Compare the closed form with the general engine for all X, Y <= xmax, n <= nmax.

    Disagreements are recorded as (X, Y, n, expected, found).
    """
    rs = kl.table.rs
    if rs.label != "A1" or not kl.table.affine:
        raise DomainError(f"the A1 oracle needs an affine A1 table, got {kl.table.label}")
    if kl.max_length < xmax:
        raise TruncationError(f"table bound {kl.max_length} is below xmax={xmax}")

    by_length = {kl.table.lengths[x]: x for x in wplus_elements(kl)}
    report = A1Report()
    for X in range(1, xmax + 1):
        row = ext_row(kl, by_length[X])
        for Y in range(1, xmax + 1):
            y = by_length[Y]
            for n in range(nmax + 1):
                expected = a1_ext_dim(A1Query(X, Y, n)).dim
                found = row.get((y, n), 0)
                report.checked += 1
                if expected != found:
                    report.disagreements.append((X, Y, n, expected, found))
    return report
