import pytest

from klgrowth.errors import DomainError, TruncationError
from klgrowth.klcore import (
    ONE,
    ZERO,
    KLTable,
    LaurentFreePoly,
    cached_bound,
    kl_polynomial,
    kl_polynomial_via,
    load_cache,
    mu,
    save_cache,
    t_coefficient,
)
from klgrowth.rootsys import build_root_system
from klgrowth.weylaff import bruhat_leq, generate, parse_word


@pytest.fixture(scope="module")
def a1_kl():
    return KLTable(generate(build_root_system("A", 1), 30)).build_all()


@pytest.fixture(scope="module")
def a2_kl():
    return KLTable(generate(build_root_system("A", 2), 10)).build_all()


@pytest.fixture(scope="module")
def a3_finite_kl():
    return KLTable(generate(build_root_system("A", 3), 6, affine=False)).build_all()


def test_polynomial_basics():
    p = LaurentFreePoly.from_coefficients([1, 1])
    assert str(p) == "1 + q"
    assert p.coefficients() == [1, 1]
    assert p.degree == 1
    assert ZERO.coefficients() == [0]
    assert str(ZERO) == "0"
    assert p * p == LaurentFreePoly.from_coefficients([1, 2, 1])
    assert p - p == ZERO
    assert p.shift(2).coeffs == {2: 1, 3: 1}
    assert (p * -1).has_negative_coefficient()
    with pytest.raises(DomainError):
        LaurentFreePoly.monomial(-1).coefficients()


def test_t_coefficient_examples():
    assert t_coefficient(ONE, 0) == 1
    assert t_coefficient(ONE, 1) == 0
    assert t_coefficient(LaurentFreePoly.from_coefficients([1, 1]), 2) == 1
    assert t_coefficient(LaurentFreePoly.from_coefficients([1, 1]), -2) == 0


def test_a1_polynomials_are_trivial(a1_kl):
    table = a1_kl.table
    for x in range(len(table)):
        for y in range(len(table)):
            expected = ONE if bruhat_leq(table, y, x) else ZERO
            assert kl_polynomial(a1_kl, y, x) == expected


def test_a1_mu(a1_kl):
    table = a1_kl.table
    x = parse_word(table, "s1 s0 s1")
    assert mu(a1_kl, parse_word(table, "s1 s0"), x) == 1
    assert mu(a1_kl, parse_word(table, "s0 s1"), x) == 1
    assert mu(a1_kl, 0, x) == 0
    assert mu(a1_kl, x, x) == 0
    assert mu(a1_kl, x, parse_word(table, "s1 s0")) == 1


def test_structural_properties(a2_kl):
    table = a2_kl.table
    lengths = table.lengths
    for x in range(len(table)):
        column = a2_kl.column(x)
        assert column[x] == ONE
        assert set(column) == {y for y in range(len(table)) if bruhat_leq(table, y, x)}
        for y, p in column.items():
            assert p.coeff(0) == 1
            assert not p.has_negative_coefficient()
            if y != x:
                assert 2 * p.degree <= lengths[x] - lengths[y] - 1


def test_left_descent_invariance(a2_kl):
    table = a2_kl.table
    for x in range(len(table)):
        for s in table.left_descents(x):
            for y in range(len(table)):
                sy = table.left[y][s]
                if sy != -1:
                    assert kl_polynomial(a2_kl, y, x) == kl_polynomial(a2_kl, sy, x)


def test_mu_is_symmetric(a2_kl):
    table = a2_kl.table
    for x in range(0, len(table), 7):
        for y in range(0, len(table), 5):
            assert mu(a2_kl, x, y) == mu(a2_kl, y, x)


def test_every_descent_gives_the_same_column():
    kl = KLTable(generate(build_root_system("A", 2), 8))
    table = kl.table
    for x in range(1, len(table)):
        expected = kl.column(x)
        for s in table.left_descents(x):
            assert kl.column_via(x, s) == expected
            y = table.left[x][s]
            assert kl_polynomial_via(kl, y, x, s) == expected[y]


def test_column_via_needs_a_descent(a2_kl):
    table = a2_kl.table
    with pytest.raises(DomainError):
        a2_kl.column_via(parse_word(table, "s1"), 2)


def test_finite_a3_singular_pairs(a3_finite_kl):
    table = a3_finite_kl.table
    q_plus_one = LaurentFreePoly.from_coefficients([1, 1])
    x = parse_word(table, "s2 s1 s3 s2")
    assert kl_polynomial(a3_finite_kl, 0, x) == q_plus_one
    assert kl_polynomial(a3_finite_kl, parse_word(table, "s2"), x) == q_plus_one
    assert kl_polynomial(a3_finite_kl, 0, parse_word(table, "s1 s2 s3 s2 s1")) == q_plus_one


def test_longest_element_column_is_all_ones(a3_finite_kl):
    table = a3_finite_kl.table
    w0 = table.stratum(6)[0]
    assert all(kl_polynomial(a3_finite_kl, y, w0) == ONE for y in range(len(table)))


def test_index_outside_table(a2_kl):
    with pytest.raises(TruncationError):
        kl_polynomial(a2_kl, 0, len(a2_kl.table))


def test_threads_do_not_change_results():
    rs = build_root_system("B", 2)
    serial = list(KLTable(generate(rs, 8)).build_all(threads=1).pairs())
    threaded = list(KLTable(generate(rs, 8)).build_all(threads=4).pairs())
    assert serial == threaded


def test_cache_round_trip(tmp_path):
    table = generate(build_root_system("A", 2), 6)
    kl = KLTable(table).build_all()
    path = tmp_path / "a2.klc"
    count = save_cache(kl, path)
    assert count == len(list(kl.pairs()))
    assert path.read_text(encoding="utf-8").startswith("# klgrowth kl-cache v1\n# group A2 affine L=6\n")

    loaded = load_cache(generate(build_root_system("A", 2), 6), path)
    assert list(loaded.pairs()) == list(kl.pairs())
    assert loaded.mu_below(len(table) - 1) == kl.mu_below(len(table) - 1)


def test_cache_for_another_group_is_rejected(tmp_path):
    path = tmp_path / "a2.klc"
    save_cache(KLTable(generate(build_root_system("A", 2), 4)).build_all(), path)
    with pytest.raises(DomainError):
        load_cache(generate(build_root_system("A", 2), 5), path)


def test_longer_cache_serves_shorter_table(tmp_path):
    path = tmp_path / "a2.klc"
    save_cache(KLTable(generate(build_root_system("A", 2), 7)).build_all(), path)
    short = generate(build_root_system("A", 2), 5)
    assert cached_bound(short, path) == 7
    assert cached_bound(generate(build_root_system("B", 2), 5), path) is None
    loaded = load_cache(short, path)
    assert list(loaded.pairs()) == list(KLTable(short).build_all().pairs())


def test_incomplete_cache_is_rejected(tmp_path):
    path = tmp_path / "a1.klc"
    save_cache(KLTable(generate(build_root_system("A", 1), 4)).build_all(), path)
    lines = path.read_text(encoding="utf-8").splitlines()
    path.write_text("\n".join(lines[:5]) + "\n", encoding="utf-8")
    with pytest.raises(DomainError):
        load_cache(generate(build_root_system("A", 1), 4), path)
