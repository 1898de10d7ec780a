from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tripletphase.errors import IndexOutOfRange, NotSymmetric
from tripletphase.symfun import (
    SymPoly,
    decompose_in_elementary,
    elementary_polynomial,
    is_symmetric,
    monomial_symmetric,
    newton_e_from_p,
    newton_p_from_e,
    palindromic_normalize,
)

VARS = ["a", "b", "c"]


def test_format_and_content():
    p = SymPoly.parse("2*c1^2 + 2*c1 - 2*c2")
    assert p.format(factor_content=True) == "2*(c1^2 + c1 - c2)"
    assert p.format() == "2*c1^2 + 2*c1 - 2*c2"


def test_natural_variable_order():
    p = SymPoly.parse("c10 + c2 + c1")
    assert p.format() == "c1 + c2 + c10"


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-5, 5), max_size=5))
def test_parse_format_round_trip(d):
    p = SymPoly.from_exponents(["c1", "p"], d)
    assert SymPoly.parse(p.format()) == p


def test_newton_small_cases():
    assert newton_p_from_e(2, 5) == SymPoly.parse("e1^2 - 2*e2")
    assert newton_e_from_p(2, 5) == SymPoly.parse("1/2*p1^2 - 1/2*p2")


def test_newton_range():
    with pytest.raises(IndexOutOfRange):
        newton_p_from_e(4, 3)


@given(st.lists(st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5)), min_size=4, max_size=4))
def test_newton_numeric(values):
    env = {}
    names = [f"v{i}" for i in range(4)]
    for k in range(1, 5):
        env[f"e{k}"] = elementary_polynomial(k, names).evaluate(dict(zip(names, values)))
        env[f"p{k}"] = sum(v ** k for v in values)
    for k in range(1, 5):
        assert newton_p_from_e(k, 4).evaluate(env) == env[f"p{k}"]
        assert newton_e_from_p(k, 4).evaluate(env) == env[f"e{k}"]


def test_decompose_power_sum():
    f = monomial_symmetric([2, 0, 0], VARS)
    assert decompose_in_elementary(f, VARS) == SymPoly.parse("s1^2 - 2*s2")


@given(st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_decompose_recombines(exps):
    f = monomial_symmetric(exps, VARS)
    d = decompose_in_elementary(f, VARS)
    back = d.substitute({f"s{k}": elementary_polynomial(k, VARS) for k in range(1, 4)})
    assert back == f


def test_not_symmetric():
    f = SymPoly.parse("a^2 + b")
    assert not is_symmetric(f, VARS)
    with pytest.raises(NotSymmetric):
        decompose_in_elementary(f, VARS)


def test_palindromic_normalize():
    P = SymPoly.parse("s4 + s5 + s6")
    assert palindromic_normalize(P, 6) == SymPoly.parse("s2 + s1 + 1")
