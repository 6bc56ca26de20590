"""
Irreducible root systems of types A-G.

Strategy
--------
Each type is described by the Gram matrix of its simple roots, normalised so
that short roots have squared length 2 (long roots: 4, or 6 in type G).
Everything else follows from it:

  1. the pairing table (alpha_i, alpha_j^vee) = 2 B_ij / B_jj,
  2. the positive roots, by closing the simple roots under simple reflections,
  3. rho, the highest short root alpha_0 and h = (rho, alpha_0^vee) + 1.

Roots are integer vectors in simple-root coordinates; weights are integer
vectors in fundamental-weight coordinates. Conversions go through the exact
inverse of the pairing table.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

from klgrowth.errors import DomainError

if TYPE_CHECKING:
    from klgrowth.weylaff import AffineElement


Vector = tuple[int, ...]

TYPE_LABELS = ("A", "B", "C", "D", "E", "F", "G")

# Bad primes per type; E is split by rank.
BAD_PRIMES: dict[str, tuple[int, ...]] = {
    "A": (),
    "B": (2,),
    "C": (2,),
    "D": (2,),
    "E6": (2, 3),
    "E7": (2, 3),
    "E8": (2, 3, 5),
    "F": (2, 3),
    "G": (2, 3),
}

# Sporadic exceptional values of l.
EXTRA_EXCEPTIONAL: dict[str, tuple[int, ...]] = {
    "E6": (9,),
    "E8": (7, 9),
}


@dataclass(frozen=True)
class Weight:
    """A weight in fundamental-weight coordinates."""

    coords: Vector

    def __add__(self, other: Weight) -> Weight:
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: Weight) -> Weight:
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> Weight:
        return Weight(tuple(-a for a in self.coords))

    def scaled(self, factor: int) -> Weight:
        return Weight(tuple(factor * a for a in self.coords))

    def is_dominant(self) -> bool:
        return all(a >= 0 for a in self.coords)

    def __str__(self) -> str:
        return " ".join(str(a) for a in self.coords)


@dataclass(frozen=True)
class RootSystem:
    """Cartan data and exact root/weight arithmetic for one irreducible type."""

    type_label: str
    rank: int
    gram: tuple[Vector, ...]
    cartan_matrix: tuple[Vector, ...]
    positive_roots: tuple[Vector, ...]
    rho: Weight
    coxeter_number: int
    alpha0: Vector
    inverse_pairing: tuple[tuple[Fraction, ...], ...]

    @property
    def label(self) -> str:
        return f"{self.type_label}{self.rank}"

    @property
    def simple_roots(self) -> tuple[Vector, ...]:
        return tuple(_unit(self.rank, i) for i in range(self.rank))

    @property
    def roots(self) -> tuple[Vector, ...]:
        """All roots, positive first."""
        return self.positive_roots + tuple(negate(beta) for beta in self.positive_roots)

    def form(self, u: Sequence, v: Sequence):
        """Symmetric form on simple-root coordinates (int or Fraction entries)."""
        r = self.rank
        return sum(u[i] * self.gram[i][j] * v[j] for i in range(r) for j in range(r) if u[i] and v[j])

    def coroot_pairing(self, u: Sequence, beta: Sequence):
        """(u, beta^vee) for u in simple-root coordinates."""
        value = Fraction(2 * self.form(u, beta), self.form(beta, beta))
        return int(value) if value.denominator == 1 else value

    def weight_pairing(self, weight: Weight, beta: Sequence) -> int:
        """(weight, beta^vee) for a weight in fundamental coordinates."""
        numerator = sum(weight.coords[j] * beta[j] * self.gram[j][j] for j in range(self.rank))
        value = Fraction(numerator, self.form(beta, beta))
        if value.denominator != 1:
            raise DomainError(f"non-integral pairing of {weight} with {beta} in {self.label}")
        return int(value)

    def height(self, beta: Sequence) -> int:
        return sum(beta)

    def is_short(self, beta: Sequence) -> bool:
        return self.form(beta, beta) == 2

    def to_weight(self, u: Sequence) -> Weight:
        """Fundamental coordinates of an element of the root lattice."""
        coords = []
        for j in range(self.rank):
            value = sum(u[i] * self.cartan_matrix[i][j] for i in range(self.rank))
            value = Fraction(value)
            if value.denominator != 1:
                raise DomainError(f"{tuple(u)} does not map to an integral weight")
            coords.append(int(value))
        return Weight(tuple(coords))

    def to_root_coords(self, weight: Weight) -> tuple[Fraction, ...]:
        """Simple-root coordinates of a weight (rational in general)."""
        return tuple(
            sum((weight.coords[i] * self.inverse_pairing[i][j] for i in range(self.rank)), Fraction(0))
            for j in range(self.rank)
        )

    def root_difference(self, nu: Weight, lam: Weight) -> Vector:
        """nu - lam in simple-root coordinates; the difference must lie in the root lattice."""
        coords = self.to_root_coords(nu - lam)
        if any(c.denominator != 1 for c in coords):
            raise DomainError(f"{nu} - {lam} is not in the root lattice of {self.label}")
        return tuple(int(c) for c in coords)


def negate(beta: Sequence[int]) -> Vector:
    return tuple(-c for c in beta)


def _unit(rank: int, i: int) -> Vector:
    return tuple(int(i == j) for j in range(rank))


def _check_rank(type_label: str, rank: int) -> None:
    if type_label not in TYPE_LABELS:
        raise DomainError(f"unknown root system type {type_label!r} (expected one of {', '.join(TYPE_LABELS)})")
    minimum = {"A": 1, "B": 2, "C": 2, "D": 4}
    allowed = {"E": (6, 7, 8), "F": (4,), "G": (2,)}
    if type_label in allowed:
        ok = rank in allowed[type_label]
    else:
        ok = rank >= minimum[type_label]
    if not ok:
        raise DomainError(f"{type_label}{rank} is not an irreducible root system")


def _gram_matrix(type_label: str, rank: int) -> list[list[int]]:
    gram = [[0] * rank for _ in range(rank)]

    def node(i: int, squared_length: int) -> None:
        gram[i - 1][i - 1] = squared_length

    def bond(i: int, j: int, value: int) -> None:
        gram[i - 1][j - 1] = gram[j - 1][i - 1] = value

    for i in range(1, rank + 1):
        node(i, 2)

    if type_label == "A":
        for i in range(1, rank):
            bond(i, i + 1, -1)
    elif type_label == "B":
        for i in range(1, rank):
            node(i, 4)
        for i in range(1, rank):
            bond(i, i + 1, -2)
    elif type_label == "C":
        node(rank, 4)
        for i in range(1, rank - 1):
            bond(i, i + 1, -1)
        bond(rank - 1, rank, -2)
    elif type_label == "D":
        for i in range(1, rank - 1):
            bond(i, i + 1, -1)
        bond(rank - 2, rank, -1)
    elif type_label == "E":
        bond(1, 3, -1)
        bond(2, 4, -1)
        for i in range(3, rank):
            bond(i, i + 1, -1)
    elif type_label == "F":
        node(1, 4)
        node(2, 4)
        bond(1, 2, -2)
        bond(2, 3, -2)
        bond(3, 4, -1)
    elif type_label == "G":
        node(2, 6)
        bond(1, 2, -3)
    return gram


def _invert(matrix: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    """Gauss-Jordan inverse over the rationals."""
    n = len(matrix)
    rows = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        lead = rows[col][col]
        rows[col] = [v / lead for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return tuple(tuple(row[n:]) for row in rows)


def _positive_roots(rank: int, pairing: Sequence[Sequence[int]]) -> tuple[Vector, ...]:
    simple = [_unit(rank, i) for i in range(rank)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(rank):
                c = sum(beta[k] * pairing[k][i] for k in range(rank))
                if c == 0 or beta == simple[i]:
                    continue
                image = tuple(b - c * int(k == i) for k, b in enumerate(beta))
                if image not in found:
                    found.add(image)
                    nxt.append(image)
        frontier = nxt
    return tuple(sorted(found, key=lambda b: (sum(b), tuple(-c for c in b))))


def build_root_system(type_label: str, rank: int) -> RootSystem:
    """Build the root system of the given Bourbaki type and rank.

    Args:
        type_label: One of A, B, C, D, E, F, G (case-insensitive).
        rank: Rank r; must form a valid irreducible type (A1+, B2+, C2+, D4+, E6-8, F4, G2).

    Returns:
        The immutable RootSystem.
    """
    type_label = str(type_label).upper()
    _check_rank(type_label, rank)

    gram = _gram_matrix(type_label, rank)
    pairing = tuple(tuple(2 * gram[i][j] // gram[j][j] for j in range(rank)) for i in range(rank))
    positive = _positive_roots(rank, pairing)

    def norm(beta: Vector) -> int:
        return sum(beta[i] * gram[i][j] * beta[j] for i in range(rank) for j in range(rank))

    short = [beta for beta in positive if norm(beta) == 2]
    alpha0 = max(short, key=lambda b: (sum(b), b))

    rho = Weight((1,) * rank)
    rs = RootSystem(
        type_label=type_label,
        rank=rank,
        gram=tuple(tuple(row) for row in gram),
        cartan_matrix=pairing,
        positive_roots=positive,
        rho=rho,
        coxeter_number=0,
        alpha0=alpha0,
        inverse_pairing=_invert(pairing),
    )
    h = rs.weight_pairing(rho, alpha0) + 1
    return replace(rs, coxeter_number=h)


def root_system_from_label(label: str) -> RootSystem:
    """Parse "A1", "B2", "E8"... into a RootSystem."""
    label = label.strip()
    if len(label) < 2 or not label[1:].isdigit():
        raise DomainError(f"cannot parse root system label {label!r}")
    return build_root_system(label[0], int(label[1:]))


# -- dot action ---------------------------------------------------------------


def dot_action(rs: RootSystem, element: AffineElement, weight: Weight, l: int) -> Weight:
    """w . weight = w(weight + rho) - rho, with translations of w scaled by l."""
    if l < 1:
        raise DomainError(f"l must be positive, got {l}")
    shifted = rs.to_root_coords(weight + rs.rho)
    image = element.apply(shifted, scale=l)
    return rs.to_weight(image) - rs.rho


# -- l-dependent data ---------------------------------------------------------


def compute_phi0(rs: RootSystem, l: int) -> frozenset[Vector]:
    """All roots alpha (both signs) with (rho, alpha^vee) divisible by l."""
    if l < 2:
        raise DomainError(f"l must be at least 2, got {l}")
    hits = set()
    for beta in rs.positive_roots:
        if rs.weight_pairing(rs.rho, beta) % l == 0:
            hits.add(beta)
            hits.add(negate(beta))
    return frozenset(hits)


def _type_key(rs: RootSystem) -> str:
    return rs.label if rs.type_label == "E" else rs.type_label


def is_exceptional(rs: RootSystem, l: int) -> bool:
    if l < 2:
        raise DomainError(f"l must be at least 2, got {l}")
    key = _type_key(rs)
    if l % 2 == 0:
        return True
    if rs.type_label == "G" and l % 3 == 0:
        return True
    if l in BAD_PRIMES[key]:
        return True
    if rs.type_label == "A" and (rs.rank + 1) % l == 0:
        return True
    return l in EXTRA_EXCEPTIONAL.get(key, ())


def smallest_valid_l(rs: RootSystem) -> int:
    """Smallest non-exceptional integer strictly above the Coxeter number."""
    l = rs.coxeter_number + 1
    while is_exceptional(rs, l):
        l += 1
    return l
