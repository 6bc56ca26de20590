"""
Weight multiplicities of symmetric powers S^m(u*).

The weights of u* are the positive roots, so dim S^m(u*)_sigma is the number of
multisets of exactly m positive roots summing to sigma. It is counted with a
dense dynamic-programming table indexed by (parts used, partial sum), filled
root by root in height order; entries are exact Python integers
(numpy dtype=object).

The module also builds the triple families used to exhibit many such
multisets at once and checks those witnesses against the exact count.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from klgrowth.errors import DomainError, ResourceCapError
from klgrowth.extcalc import GrowthSequence, estimate_gamma
from klgrowth.rootsys import RootSystem, Vector

DEFAULT_MAX_CELLS = 20_000_000

Triple = tuple[int, int, int]


@dataclass(frozen=True)
class PartitionCountQuery:
    m: int
    sigma: Vector

    def evaluate(self, rs: RootSystem) -> int:
        return weight_multiplicity(rs, self.m, self.sigma)


@dataclass(frozen=True)
class TripleSet:
    """Triples (alpha, beta, gamma) of simple-root numbers (1-based)."""

    ordering: tuple[int, ...]
    triples: tuple[Triple, ...]
    tau_phi: Vector


@dataclass(frozen=True)
class TripleWitness:
    n: int
    m: int
    target: Vector
    count: int
    bound: int
    distinct: int
    distinct_ok: bool
    triples: tuple[Triple, ...]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "target": list(self.target),
            "count": self.count,
            "bound": self.bound,
            "distinct_ok": self.distinct_ok,
        }


# -- dynamic programming ------------------------------------------------------


def _fill(rs: RootSystem, parts: int, box: Sequence[int], max_cells: int) -> np.ndarray:
    shape = (parts + 1, *(b + 1 for b in box))
    cells = int(np.prod(shape, dtype=object))
    if cells > max_cells:
        raise ResourceCapError(f"{rs.label}: partition table of {cells} cells exceeds the cap of {max_cells}")
    table = np.zeros(shape, dtype=object)
    table[(0,) * len(shape)] = 1
    for beta in rs.positive_roots:
        if any(b > limit for b, limit in zip(beta, box)):
            continue
        dst = tuple(slice(b, None) for b in beta)
        src = tuple(slice(0, limit + 1 - b) for b, limit in zip(beta, box))
        # ascending k reuses beta any number of times
        for k in range(1, parts + 1):
            table[(k, *dst)] += table[(k - 1, *src)]
    return table


def weight_multiplicity(rs: RootSystem, m: int, sigma: Sequence[int], max_cells: int = DEFAULT_MAX_CELLS) -> int:
    """Number of multisets of m positive roots with sum sigma (simple-root coordinates)."""
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    if len(sigma) != rs.rank:
        raise DomainError(f"sigma {tuple(sigma)} has the wrong rank for {rs.label}")
    if any(c < 0 for c in sigma):
        return 0
    highest = max(sum(beta) for beta in rs.positive_roots)
    if not m <= sum(sigma) <= m * highest:
        return 0
    table = _fill(rs, m, tuple(sigma), max_cells)
    return int(table[(m, *sigma)])


def multiplicity_table(rs: RootSystem, m_max: int, max_cells: int = DEFAULT_MAX_CELLS) -> np.ndarray:
    """table[m][sigma] for every m <= m_max and every sigma that can occur."""
    if m_max < 0:
        raise DomainError(f"m must be nonnegative, got {m_max}")
    theta = rs.positive_roots[-1]
    return _fill(rs, m_max, tuple(m_max * c for c in theta), max_cells)


def _layer_max(layer: np.ndarray) -> tuple[Vector, int]:
    best = max(layer.flat)
    position = np.argwhere(layer == best)[0]
    return tuple(int(c) for c in position), int(best)


def max_multiplicity(rs: RootSystem, m: int, max_cells: int = DEFAULT_MAX_CELLS) -> tuple[Vector, int]:
    """A maximising sigma (lexicographically least) and its multiplicity."""
    table = multiplicity_table(rs, m, max_cells)
    return _layer_max(table[m])


def s_phi_estimate(rs: RootSystem, N: int, window: tuple[int, int] | None = None,
                   max_cells: int = DEFAULT_MAX_CELLS) -> GrowthSequence:
    """Max weight multiplicities of S^n(u*) for n <= N and their growth estimate."""
    if N < 8:
        raise DomainError(f"N must be at least 8, got {N}")
    table = multiplicity_table(rs, N, max_cells)
    terms = tuple(_layer_max(table[n])[1] for n in range(N + 1))
    window = window or (max(1, N // 4), N)
    return GrowthSequence(terms=terms, estimated_gamma=estimate_gamma(terms, window), window=window)


# -- triples ------------------------------------------------------------------


def _adjacent(rs: RootSystem, i: int, j: int) -> bool:
    return i != j and rs.gram[i - 1][j - 1] != 0


def _tau(rs: RootSystem, triples: Sequence[Triple]) -> Vector:
    tau = [0] * rs.rank
    for a, b, c in triples:
        tau[a - 1] += 1
        tau[b - 1] += 2
        tau[c - 1] += 1
    return tuple(tau)


def build_triples(rs: RootSystem, ordering: Sequence[int] | None = None) -> TripleSet:
    """All (alpha, beta, gamma) with gamma after alpha and both adjacent to beta."""
    if rs.rank < 3:
        raise DomainError(f"triples need rank at least 3, {rs.label} has rank {rs.rank}")
    ordering = tuple(ordering) if ordering else tuple(range(1, rs.rank + 1))
    if sorted(ordering) != list(range(1, rs.rank + 1)):
        raise DomainError(f"{ordering} is not an ordering of the simple roots of {rs.label}")
    position = {node: k for k, node in enumerate(ordering)}
    triples = []
    for beta in ordering:
        neighbours = [node for node in ordering if _adjacent(rs, beta, node)]
        for alpha, gamma in itertools.combinations(neighbours, 2):
            triples.append((alpha, beta, gamma) if position[alpha] < position[gamma] else (gamma, beta, alpha))
    return TripleSet(ordering, tuple(triples), _tau(rs, triples))


def independent_triples(rs: RootSystem, triple_set: TripleSet) -> TripleSet:
    """Drop, at every branch node, the triple whose outer roots are its last two neighbours."""
    position = {node: k for k, node in enumerate(triple_set.ordering)}
    outer: dict[int, set[int]] = {}
    for a, b, c in triple_set.triples:
        outer.setdefault(b, set()).update((a, c))
    dropped = set()
    for b, nodes in outer.items():
        if len(nodes) >= 3:
            last_two = sorted(nodes, key=position.__getitem__)[-2:]
            dropped.add((last_two[0], b, last_two[1]))
    kept = tuple(t for t in triple_set.triples if t not in dropped)
    return TripleSet(triple_set.ordering, kept, _tau(rs, kept))


def _split(rs: RootSystem, triple: Triple) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
    a, b, c = (rs.simple_roots[i - 1] for i in triple)

    def plus(u: Vector, v: Vector) -> Vector:
        return tuple(x + y for x, y in zip(u, v))

    left = (plus(a, b), b, c)
    right = (a, b, plus(b, c))
    return left, right


def witness_partitions(rs: RootSystem, triples: Sequence[Triple], n: int) -> list[tuple[Vector, ...]]:
    """The (n+1)^|triples| multisets built from left/right splittings, as sorted tuples."""
    splits = [_split(rs, t) for t in triples]
    partitions = []
    for choice in itertools.product(range(n + 1), repeat=len(splits)):
        parts: Counter[Vector] = Counter()
        for k, (left, right) in zip(choice, splits):
            for root in left:
                parts[root] += k
            for root in right:
                parts[root] += n - k
        partitions.append(tuple(sorted(parts.elements())))
    return partitions


def triple_witness(
    rs: RootSystem,
    n: int,
    ordering: Sequence[int] | None = None,
    family: str = "independent",
    max_cells: int = DEFAULT_MAX_CELLS,
) -> TripleWitness:
    """Check dim S^m(u*)_target >= (n+1)^|T| with m = 3n|T| and target = n tau.

    `family="independent"` uses the sub-family on which the split partitions are
    pairwise distinct (all triples outside types D and E); `family="full"`
    uses every triple and reports distinctness as found.
    """
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    triple_set = build_triples(rs, ordering)
    if family == "independent":
        triple_set = independent_triples(rs, triple_set)
    elif family != "full":
        raise DomainError(f"unknown triple family {family!r}")

    size = len(triple_set.triples)
    m = 3 * n * size
    target = tuple(n * c for c in triple_set.tau_phi)
    count = weight_multiplicity(rs, m, target, max_cells)
    bound = (n + 1) ** size
    distinct = len(set(witness_partitions(rs, triple_set.triples, n)))
    assert count >= distinct, f"{rs.label}: {distinct} distinct partitions but only {count} counted"
    return TripleWitness(
        n=n,
        m=m,
        target=target,
        count=count,
        bound=bound,
        distinct=distinct,
        distinct_ok=distinct == bound,
        triples=triple_set.triples,
    )
