import pytest

from tripletphase.errors import InputError, OrderMismatch
from tripletphase.witness import (
    RootPoint,
    closed_form_n5,
    f_value,
    family_pair,
    is_witness,
    q_value,
    recheck_float,
    rho_equivalent,
    search_n4,
    verify_or_search_n4,
    verify_witness,
)


@pytest.mark.parametrize("n", range(5, 13))
def test_family(n):
    report = verify_witness(n)
    assert report["passed"], report


def test_closed_form_n5():
    x, _ = family_pair(5)
    assert f_value(x).equal_mod_phi(closed_form_n5())


def test_family_range():
    with pytest.raises(InputError):
        family_pair(4)


def test_order_mismatch():
    with pytest.raises(OrderMismatch):
        rho_equivalent(RootPoint(5, (0, 1)), RootPoint(7, (0, 1)))


def test_difference_multiset_decides_rho():
    a, b = RootPoint(13, (0, 1, 4, 6)), RootPoint(13, (0, 1, 4, 11))
    assert a.differences() != b.differences()
    assert not rho_equivalent(a, b)
    assert b.differences() == [1, 2, 3, 3, 4, 6, 7, 9, 10, 10, 11, 12]


def test_n4_search():
    x, y = search_n4()
    assert (x.order, x.exponents, y.exponents) == (8, (0, 1, 2, 5), (0, 1, 3, 4))
    assert is_witness(x, y)
    assert all(q_value(x, r).equal_mod_phi(q_value(y, r)) for r in range(1, 25))
    rc = recheck_float(x, y)
    assert rc["differences_equal"] and rc["f_differs"]


def test_verify_or_search_n4_report():
    rep = verify_or_search_n4()
    assert rep["reference_pair_passed"] is False
    assert rep["certified_pair"] == {"k": 8, "x_exps": [0, 1, 2, 5], "y_exps": [0, 1, 3, 4]}


def test_order_13_witness_exists():
    assert is_witness(RootPoint(13, (0, 1, 4, 6)), RootPoint(13, (0, 1, 3, 9)))
