"""
Affine Weyl groups as integer affine maps.

An element of W_a acts on simple-root coordinates by u -> A u + t, with A the
matrix of a finite Weyl group element and t in the root lattice. That pair is
the canonical form: equality and hashing never depend on how the element was
reached. Generators are named by index:

    s1..sr   simple reflections s_i(u) = u - (u, alpha_i^vee) alpha_i
    s0       the affine reflection s_{alpha_0,-1}(u) = s_{alpha_0}(u) - alpha_0

GroupTable enumerates every element up to a length bound breadth-first, sorts
each length stratum by lexicographically least reduced word and records the
left/right action of every generator.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from klgrowth.errors import DomainError, ResourceCapError, TruncationError
from klgrowth.rootsys import RootSystem, Vector

Matrix = tuple[Vector, ...]

DEFAULT_MAX_ELEMENTS = 250_000

IDENTITY_WORD = "e"
RE_GENERATOR = re.compile(r"^s(\d+)$")


def _freeze(array: np.ndarray) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in array.tolist())


@dataclass(frozen=True)
class AffineElement:
    """Element of W_a; identity is (linear, translation), length is carried along."""

    linear: Matrix
    translation: Vector
    length: int = field(default=0, compare=False)

    @classmethod
    def identity(cls, rank: int) -> AffineElement:
        return cls(_freeze(np.eye(rank, dtype=np.int64)), (0,) * rank, 0)

    def apply(self, u: Sequence, scale: int = 1) -> tuple:
        """Image of u; translations are multiplied by `scale` (the l-dilated action)."""
        return tuple(
            sum(row[j] * u[j] for j in range(len(u))) + scale * t
            for row, t in zip(self.linear, self.translation)
        )

    def compose(self, other: AffineElement, length: int = 0) -> AffineElement:
        """self o other (apply `other` first)."""
        a = np.array(self.linear, dtype=np.int64)
        b = np.array(other.linear, dtype=np.int64)
        shift = a @ np.array(other.translation, dtype=np.int64) + np.array(self.translation, dtype=np.int64)
        return AffineElement(_freeze(a @ b), tuple(int(v) for v in shift), length)

    def is_translation(self) -> bool:
        return all(self.linear[i][j] == int(i == j) for i in range(len(self.linear)) for j in range(len(self.linear)))

    def permutes_roots(self, rs: RootSystem) -> bool:
        """Whether the linear part maps the root system onto itself."""
        roots = set(rs.roots)
        image = AffineElement(self.linear, (0,) * rs.rank)
        return {image.apply(beta) for beta in roots} == roots


def simple_reflections(rs: RootSystem, affine: bool = True) -> dict[int, AffineElement]:
    """Generators keyed by index, in ascending order (0 = s0 when affine)."""
    r = rs.rank
    gens: dict[int, AffineElement] = {}
    if affine:
        a0 = rs.alpha0
        # (alpha_j, alpha_0^vee) = (alpha_j, alpha_0) since alpha_0 is short
        pair = [rs.form(_basis(r, j), a0) for j in range(r)]
        linear = tuple(tuple(int(k == j) - a0[k] * pair[j] for j in range(r)) for k in range(r))
        gens[0] = AffineElement(linear, tuple(-c for c in a0), 1)
    for i in range(r):
        linear = tuple(
            tuple(int(k == j) - int(k == i) * rs.cartan_matrix[j][i] for j in range(r)) for k in range(r)
        )
        gens[i + 1] = AffineElement(linear, (0,) * r, 1)
    return gens


def _basis(rank: int, j: int) -> Vector:
    return tuple(int(k == j) for k in range(rank))


class GroupTable:
    """All elements of W_a (or W) up to a length bound, with generator actions.

    `right[x][s]` and `left[x][s]` are the indices of x*s and s*x, or -1 when
    the product is longer than the bound (or s is not a generator of the table).
    """

    def __init__(
        self,
        rs: RootSystem,
        affine: bool,
        max_length: int,
        elements: list[AffineElement],
        words: list[tuple[int, ...]],
        generators: dict[int, AffineElement],
    ):
        self.rs = rs
        self.affine = affine
        self.max_length = max_length
        self.elements = elements
        self.words = words
        self.generators = generators
        self.lengths = [e.length for e in elements]
        self.index = {e: i for i, e in enumerate(elements)}
        width = rs.rank + 1
        self.right = [[-1] * width for _ in elements]
        self.left = [[-1] * width for _ in elements]
        for i, element in enumerate(elements):
            for s, g in generators.items():
                self.right[i][s] = self.index.get(element.compose(g), -1)
                self.left[i][s] = self.index.get(g.compose(element), -1)
        self._strata: list[list[int]] = [[] for _ in range(max_length + 1)]
        for i, length in enumerate(self.lengths):
            self._strata[length].append(i)
        self._bruhat: dict[tuple[int, int], bool] = {}

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def label(self) -> str:
        mode = "affine" if self.affine else "finite"
        return f"{self.rs.label} {mode} L={self.max_length}"

    @property
    def finite_generators(self) -> list[int]:
        return [s for s in self.generators if s != 0]

    def stratum(self, length: int) -> list[int]:
        return self._strata[length] if 0 <= length <= self.max_length else []

    def counts_by_length(self) -> list[int]:
        return [len(stratum) for stratum in self._strata]

    def check_index(self, x: int) -> None:
        if not 0 <= x < len(self.elements):
            raise TruncationError(f"element index {x} is outside the table ({self.label})")

    def is_left_descent(self, x: int, s: int) -> bool:
        sx = self.left[x][s]
        return sx != -1 and self.lengths[sx] < self.lengths[x]

    def is_right_descent(self, x: int, s: int) -> bool:
        xs = self.right[x][s]
        return xs != -1 and self.lengths[xs] < self.lengths[x]

    def left_descents(self, x: int) -> list[int]:
        return [s for s in self.generators if self.is_left_descent(x, s)]

    def right_descents(self, x: int) -> list[int]:
        return [s for s in self.generators if self.is_right_descent(x, s)]

    def bruhat_leq(self, x: int, y: int) -> bool:
        if x == y or x == 0:
            return True
        if self.lengths[x] >= self.lengths[y]:
            return False
        key = (x, y)
        known = self._bruhat.get(key)
        if known is not None:
            return known
        s = self.right_descents(y)[0]
        ys = self.right[y][s]
        if self.is_right_descent(x, s):
            result = self.bruhat_leq(self.right[x][s], ys)
        else:
            result = self.bruhat_leq(x, ys)
        self._bruhat[key] = result
        return result


def generate(
    rs: RootSystem,
    L: int,
    affine: bool = True,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    verbose: bool = False,
) -> GroupTable:
    """Enumerate all elements of length <= L.

    Args:
        rs: Root system of the group.
        L: Length bound.
        affine: Use S_a = S + {s0}; otherwise only the finite Weyl group.
        max_elements: Cap on the number of elements; exceeding it raises ResourceCapError.
        verbose: Print one progress line per length stratum to stderr.

    Returns:
        The GroupTable, indexed by (length, lexicographically least reduced word).
    """
    if L < 0:
        raise DomainError(f"length bound must be nonnegative, got {L}")
    gens = simple_reflections(rs, affine)
    identity = AffineElement.identity(rs.rank)
    elements = [identity]
    words: list[tuple[int, ...]] = [()]
    index = {identity: 0}
    layer = [0]

    for k in range(1, L + 1):
        fresh: dict[AffineElement, None] = {}
        for x in layer:
            for g in gens.values():
                y = elements[x].compose(g, length=k)
                if y not in index:
                    fresh.setdefault(y, None)

        entries = []
        for y in fresh:
            # first letter of the normal form: smallest left descent
            for s, g in gens.items():
                z = index.get(g.compose(y))
                if z is not None:
                    entries.append(((s,) + words[z], y))
                    break
        entries.sort(key=lambda entry: entry[0])

        if len(elements) + len(entries) > max_elements:
            raise ResourceCapError(
                f"{rs.label} table exceeds {max_elements} elements at length {k}; lower --max-length or raise the cap"
            )
        layer = []
        for word, y in entries:
            index[y] = len(elements)
            layer.append(len(elements))
            elements.append(y)
            words.append(word)
        if verbose:
            print(f"🧮 length {k}: {len(entries)} elements (total {len(elements)})", file=sys.stderr)

    return GroupTable(rs, affine, L, elements, words, gens)


def bruhat_leq(table: GroupTable, x: int, y: int) -> bool:
    """x <= y in the Bruhat order (lifting property with memoization)."""
    table.check_index(x)
    table.check_index(y)
    return table.bruhat_leq(x, y)


def is_wplus(table: GroupTable, x: int) -> bool:
    """Every finite generator is a left descent, i.e. x is longest in Wx."""
    table.check_index(x)
    return all(table.is_left_descent(x, s) for s in table.finite_generators)


def enumerate_wplus(table: GroupTable) -> list[int]:
    return [x for x in range(len(table)) if is_wplus(table, x)]


# -- words --------------------------------------------------------------------


def reduced_word(table: GroupTable, x: int) -> tuple[int, ...]:
    table.check_index(x)
    return table.words[x]


def format_word(word: Iterable[int]) -> str:
    letters = [f"s{s}" for s in word]
    return " ".join(letters) if letters else IDENTITY_WORD


def word_of(table: GroupTable, x: int) -> str:
    return format_word(reduced_word(table, x))


def parse_generators(table: GroupTable, text: str) -> list[int]:
    tokens = text.split()
    if tokens == [IDENTITY_WORD]:
        return []
    letters = []
    for token in tokens:
        match = RE_GENERATOR.match(token)
        if not match or int(match.group(1)) not in table.generators:
            raise DomainError(f"unknown generator {token!r} for {table.label}")
        letters.append(int(match.group(1)))
    return letters


def parse_word(table: GroupTable, text: str) -> int:
    """Index of the element named by a word such as "s1 s0 s1" (or "e")."""
    element = AffineElement.identity(table.rs.rank)
    for s in parse_generators(table, text):
        element = element.compose(table.generators[s])
    x = table.index.get(element)
    if x is None:
        raise TruncationError(f"{text!r} is longer than the table bound ({table.label})")
    return x


# -- cross-checks ------------------------------------------------------------


def iwahori_matsumoto_length(rs: RootSystem, translation: Sequence[int]) -> int:
    """Length of the pure translation by `translation` (simple-root coordinates)."""
    return sum(abs(rs.coroot_pairing(translation, beta)) for beta in rs.positive_roots)
