from math import comb

import pytest

from klgrowth.errors import DomainError, ResourceCapError
from klgrowth.rootsys import build_root_system
from klgrowth.symweights import (
    PartitionCountQuery,
    build_triples,
    independent_triples,
    max_multiplicity,
    multiplicity_table,
    s_phi_estimate,
    triple_witness,
    weight_multiplicity,
    witness_partitions,
)


def test_trivial_counts():
    for type_label, rank in (("A", 1), ("B", 2), ("D", 4)):
        rs = build_root_system(type_label, rank)
        assert weight_multiplicity(rs, 0, (0,) * rank) == 1
    a1 = build_root_system("A", 1)
    assert all(weight_multiplicity(a1, m, (m,)) == 1 for m in range(10))
    assert weight_multiplicity(a1, 3, (2,)) == 0


def test_b2_diagonal_law():
    rs = build_root_system("B", 2)
    for n in range(41):
        assert weight_multiplicity(rs, n, (n, n)) == n // 2 + 1


def test_a3_example():
    rs = build_root_system("A", 3)
    assert weight_multiplicity(rs, 3, (1, 2, 1)) == 2
    assert PartitionCountQuery(3, (1, 2, 1)).evaluate(rs) == 2


def test_out_of_range_weights():
    rs = build_root_system("A", 2)
    assert weight_multiplicity(rs, 2, (-1, 3)) == 0
    assert weight_multiplicity(rs, 2, (5, 5)) == 0
    with pytest.raises(DomainError):
        weight_multiplicity(rs, 2, (1, 1, 1))
    with pytest.raises(DomainError):
        weight_multiplicity(rs, -1, (0, 0))


RANK_FOUR = pytest.mark.slow


@pytest.mark.parametrize(
    "type_label,rank",
    [
        ("A", 2),
        ("B", 2),
        ("G", 2),
        ("A", 3),
        ("B", 3),
        ("C", 3),
        pytest.param("A", 4, marks=RANK_FOUR),
        pytest.param("B", 4, marks=RANK_FOUR),
        pytest.param("C", 4, marks=RANK_FOUR),
        pytest.param("D", 4, marks=RANK_FOUR),
        pytest.param("F", 4, marks=RANK_FOUR),
    ],
)
def test_layers_count_all_multisets(type_label, rank):
    rs = build_root_system(type_label, rank)
    table = multiplicity_table(rs, 6)
    roots = len(rs.positive_roots)
    for m in range(7):
        assert sum(table[m].flat) == comb(roots + m - 1, m)


def test_max_multiplicity():
    assert max_multiplicity(build_root_system("A", 1), 5) == ((5,), 1)
    assert max_multiplicity(build_root_system("B", 2), 0) == ((0, 0), 1)
    assert max_multiplicity(build_root_system("B", 2), 4) == ((4, 4), 3)


def test_cell_cap():
    with pytest.raises(ResourceCapError):
        multiplicity_table(build_root_system("E", 8), 20, max_cells=10_000)


RANKS_THREE_TO_EIGHT = [
    (type_label, rank)
    for type_label, ranks in (
        ("A", range(3, 9)),
        ("B", range(3, 9)),
        ("C", range(3, 9)),
        ("D", range(4, 9)),
        ("E", (6, 7, 8)),
        ("F", (4,)),
    )
    for rank in ranks
]


@pytest.mark.parametrize("type_label,rank", RANKS_THREE_TO_EIGHT)
def test_triple_counts(type_label, rank):
    rs = build_root_system(type_label, rank)
    # a branch node contributes three triples, a path node one
    full = rank - 1 if type_label in ("D", "E") else rank - 2
    independent = rank - 2
    triples = build_triples(rs)
    assert len(triples.triples) == full
    assert len(independent_triples(rs, triples).triples) == independent


def test_triples_examples():
    a3 = build_root_system("A", 3)
    triples = build_triples(a3)
    assert triples.triples == ((1, 2, 3),)
    assert triples.tau_phi == (1, 2, 1)
    d4 = build_root_system("D", 4)
    assert (3, 2, 4) not in independent_triples(d4, build_triples(d4)).triples
    e6 = build_root_system("E", 6)
    assert (3, 4, 5) not in independent_triples(e6, build_triples(e6)).triples
    with pytest.raises(DomainError):
        build_triples(build_root_system("A", 2))
    with pytest.raises(DomainError):
        build_triples(a3, ordering=(1, 2, 2))


def test_reversed_ordering_flips_triples():
    rs = build_root_system("A", 4)
    assert build_triples(rs, ordering=(4, 3, 2, 1)).triples == ((4, 3, 2), (3, 2, 1))


def test_triple_witness_examples():
    a3 = build_root_system("A", 3)
    witness = triple_witness(a3, 1)
    assert (witness.m, witness.target, witness.count, witness.bound) == (3, (1, 2, 1), 2, 2)
    assert witness.distinct_ok

    witness = triple_witness(a3, 0)
    assert (witness.m, witness.count, witness.bound) == (0, 1, 1)

    witness = triple_witness(build_root_system("A", 4), 1)
    assert len(witness.triples) == 2
    assert (witness.m, witness.target, witness.bound) == (6, (1, 3, 3, 1), 4)
    assert witness.count >= 4
    assert witness.to_dict()["target"] == [1, 3, 3, 1]


@pytest.mark.parametrize(
    "type_label,rank,n_max",
    [("A", 3, 3), ("A", 4, 3), ("B", 3, 3), ("D", 4, 3), ("C", 3, 2), ("D", 5, 2)],
)
def test_independent_witnesses_are_distinct(type_label, rank, n_max):
    rs = build_root_system(type_label, rank)
    for n in range(1, n_max + 1):
        witness = triple_witness(rs, n)
        assert witness.distinct_ok
        assert witness.count >= witness.bound


def test_full_family_collides_in_d4():
    rs = build_root_system("D", 4)
    witness = triple_witness(rs, 1, family="full")
    assert not witness.distinct_ok
    assert witness.distinct < witness.bound
    assert witness.count >= witness.distinct
    with pytest.raises(DomainError):
        triple_witness(rs, 1, family="other")


def test_witness_partitions_have_the_right_shape():
    rs = build_root_system("A", 4)
    triples = build_triples(rs).triples
    partitions = witness_partitions(rs, triples, 2)
    assert len(partitions) == 9
    for parts in partitions:
        assert len(parts) == 12
        assert tuple(sum(c) for c in zip(*parts)) == (2, 6, 6, 2)


def test_s_phi_rank_one_and_two_type_a():
    for rank in (1, 2):
        seq = s_phi_estimate(build_root_system("A", rank), 24)
        assert seq.terms == (1,) * 25
        assert seq.estimated_gamma == pytest.approx(1.0, abs=0.2)


def test_s_phi_needs_enough_terms():
    with pytest.raises(DomainError):
        s_phi_estimate(build_root_system("A", 1), 7)


@pytest.mark.slow
def test_s_phi_rank_two_growth():
    b2 = s_phi_estimate(build_root_system("B", 2), 40)
    g2 = s_phi_estimate(build_root_system("G", 2), 40)
    assert b2.estimated_gamma >= 1.7
    assert g2.estimated_gamma >= 3.5
    assert g2.estimated_gamma > b2.estimated_gamma
