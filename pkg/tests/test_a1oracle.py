import pytest

from klgrowth.a1oracle import A1ExtResult, A1Query, a1_ext_dim, a1_sum_row, verify_against_engine
from klgrowth.errors import DomainError, TruncationError
from klgrowth.klcore import KLTable
from klgrowth.rootsys import build_root_system
from klgrowth.weylaff import generate


def test_closed_form_examples():
    assert a1_ext_dim(A1Query(3, 1, 2)) == A1ExtResult(1, a=2, b=0, z_length=1)
    assert a1_ext_dim(A1Query(1, 1, 0)).dim == 1
    assert a1_ext_dim(A1Query(1, 1, 1)).dim == 0
    assert a1_ext_dim(A1Query(1, 1, 2)).dim == 0
    assert a1_ext_dim(A1Query(4, 4, 6)) == A1ExtResult(1, a=3, b=3, z_length=1)


def test_query_validation():
    with pytest.raises(DomainError):
        A1Query(0, 1, 0)
    with pytest.raises(DomainError):
        A1Query(1, 1, -1)


def test_row_sums():
    for n in range(8):
        for X in range(n + 1, n + 6):
            assert a1_sum_row(X, n) == n + 1
    assert a1_sum_row(1, 2) == 1
    assert a1_sum_row(2, 5) == 2


def test_engine_agrees_with_closed_form():
    kl = KLTable(generate(build_root_system("A", 1), 15)).build_all()
    report = verify_against_engine(kl, 15, 30)
    assert report.checked == 15 * 15 * 31
    assert report.disagreements == []
    assert report.ok


def test_verify_needs_affine_a1():
    kl = KLTable(generate(build_root_system("A", 2), 4)).build_all()
    with pytest.raises(DomainError):
        verify_against_engine(kl, 3, 3)
    finite = KLTable(generate(build_root_system("A", 1), 1, affine=False)).build_all()
    with pytest.raises(DomainError):
        verify_against_engine(finite, 1, 1)


def test_verify_needs_a_long_enough_table():
    kl = KLTable(generate(build_root_system("A", 1), 5)).build_all()
    with pytest.raises(TruncationError):
        verify_against_engine(kl, 8, 4)
