import pytest

from klgrowth.errors import DomainError
from klgrowth.rootsys import (
    Weight,
    build_root_system,
    compute_phi0,
    dot_action,
    is_exceptional,
    root_system_from_label,
    smallest_valid_l,
)
from klgrowth.weylaff import AffineElement, simple_reflections

ALL_TYPES = (
    [("A", r) for r in range(1, 9)]
    + [("B", r) for r in range(2, 9)]
    + [("C", r) for r in range(2, 9)]
    + [("D", r) for r in range(4, 9)]
    + [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]
)


def classical_count(type_label, r):
    return {
        "A": r * (r + 1) // 2,
        "B": r * r,
        "C": r * r,
        "D": r * (r - 1),
        "E": {6: 36, 7: 63, 8: 120}.get(r),
        "F": 24,
        "G": 6,
    }[type_label]


def classical_coxeter(type_label, r):
    return {
        "A": r + 1,
        "B": 2 * r,
        "C": 2 * r,
        "D": 2 * r - 2,
        "E": {6: 12, 7: 18, 8: 30}.get(r),
        "F": 12,
        "G": 6,
    }[type_label]


@pytest.mark.parametrize("type_label,rank", ALL_TYPES)
def test_root_counts_and_coxeter_numbers(type_label, rank):
    rs = build_root_system(type_label, rank)
    assert len(rs.positive_roots) == classical_count(type_label, rank)
    assert len(set(rs.positive_roots)) == len(rs.positive_roots)
    assert rs.coxeter_number == classical_coxeter(type_label, rank)
    assert rs.coxeter_number == rs.weight_pairing(rs.rho, rs.alpha0) + 1
    assert rs.is_short(rs.alpha0)


@pytest.mark.parametrize("type_label,rank", ALL_TYPES)
def test_rho_pairs_to_one_with_simple_coroots(type_label, rank):
    rs = build_root_system(type_label, rank)
    for alpha in rs.simple_roots:
        assert rs.weight_pairing(rs.rho, alpha) == 1
    for beta in rs.positive_roots:
        assert all(c >= 0 for c in beta)


def test_rank_one():
    rs = build_root_system("A", 1)
    assert rs.positive_roots == ((1,),)
    assert rs.coxeter_number == 2
    assert rs.rho == Weight((1,))


def test_b2_roots():
    rs = build_root_system("B", 2)
    assert set(rs.positive_roots) == {(1, 0), (0, 1), (1, 1), (1, 2)}
    assert rs.coxeter_number == 4
    assert rs.alpha0 == (1, 1)


def test_g2_roots():
    rs = build_root_system("G", 2)
    assert len(rs.positive_roots) == 6
    assert rs.coxeter_number == 6
    assert rs.positive_roots[-1] == (3, 2)


@pytest.mark.parametrize("type_label,rank", [("E", 9), ("D", 3), ("G", 3), ("B", 1), ("F", 5), ("A", 0)])
def test_invalid_types_are_rejected(type_label, rank):
    with pytest.raises(DomainError):
        build_root_system(type_label, rank)


def test_unknown_type_letter():
    with pytest.raises(DomainError):
        build_root_system("Z", 2)


def test_label_round_trip():
    assert root_system_from_label("E8").label == "E8"
    with pytest.raises(DomainError):
        root_system_from_label("B")


def test_weight_conversions():
    rs = build_root_system("A", 2)
    assert rs.to_weight((1, 0)) == Weight((2, -1))
    assert rs.root_difference(Weight((2, -1)), Weight((0, 0))) == (1, 0)
    with pytest.raises(DomainError):
        rs.root_difference(Weight((1, 0)), Weight((0, 0)))


def test_dot_action_examples():
    rs = build_root_system("A", 1)
    gens = simple_reflections(rs)
    identity = AffineElement.identity(1)
    lam = Weight((5,))
    assert dot_action(rs, identity, lam, 3) == lam
    assert dot_action(rs, gens[1], Weight((-2,)), 3) == Weight((0,))
    assert dot_action(rs, gens[0], Weight((0,)), 3) == Weight((-8,))
    with pytest.raises(DomainError):
        dot_action(rs, identity, lam, 0)


def test_phi0_examples():
    assert compute_phi0(build_root_system("A", 1), 3) == frozenset()
    assert compute_phi0(build_root_system("B", 2), 3) == {(1, 1), (-1, -1)}


@pytest.mark.parametrize("type_label,rank", ALL_TYPES)
def test_phi0_is_negation_closed_and_empty_from_h(type_label, rank):
    rs = build_root_system(type_label, rank)
    for l in range(2, rs.coxeter_number + 4):
        phi0 = compute_phi0(rs, l)
        assert {tuple(-c for c in beta) for beta in phi0} == phi0
        if l >= rs.coxeter_number:
            assert phi0 == frozenset()


def test_exceptional_examples():
    assert is_exceptional(build_root_system("B", 2), 2)
    assert is_exceptional(build_root_system("E", 6), 9)
    assert is_exceptional(build_root_system("A", 4), 5)
    assert not is_exceptional(build_root_system("A", 2), 5)
    assert is_exceptional(build_root_system("G", 2), 9)
    assert is_exceptional(build_root_system("E", 8), 7)


@pytest.mark.parametrize("type_label,rank", ALL_TYPES)
def test_odd_l_above_h_is_not_exceptional(type_label, rank):
    rs = build_root_system(type_label, rank)
    for l in range(rs.coxeter_number + 1, rs.coxeter_number + 30):
        if l % 2 == 0 or (type_label == "G" and l % 3 == 0):
            continue
        assert not is_exceptional(rs, l)


def test_smallest_valid_l():
    assert smallest_valid_l(build_root_system("A", 1)) == 3
    assert smallest_valid_l(build_root_system("A", 2)) == 5
    assert smallest_valid_l(build_root_system("B", 2)) == 5
    assert smallest_valid_l(build_root_system("G", 2)) == 7
