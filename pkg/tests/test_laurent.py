from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from tripletphase.errors import (
    PolynomialSyntaxError,
    ShapeMismatch,
    UnknownVariable,
    ZeroPolynomial,
)
from tripletphase.laurent import LaurentPolynomial, VariableShape

from strategies import laurent_polys, nonzero_rationals

S3 = VariableShape(1, 3)


def test_parse_and_format_round_trip_example():
    p = LaurentPolynomial.parse("x1^2*x2^-1 - 3/2*x3 + 4", S3)
    assert LaurentPolynomial.parse(p.format(), S3) == p


def test_parse_two_arrays():
    p = LaurentPolynomial.parse("x1_1*x2_2^-1 + x2_1")
    assert p.shape == VariableShape(2, 2)


@pytest.mark.parametrize("text", ["x1 +", "x1^", "(x1", "x1 ** 2", "2x1"])
def test_parse_errors(text):
    with pytest.raises(PolynomialSyntaxError):
        LaurentPolynomial.parse(text, S3)


def test_unknown_variable():
    with pytest.raises(UnknownVariable):
        LaurentPolynomial.parse("x4", S3)


def test_division_by_non_monomial_rejected():
    with pytest.raises(PolynomialSyntaxError):
        LaurentPolynomial.parse("1/(x1+x2)", S3)


def test_initial_exponent_is_lex_max():
    p = LaurentPolynomial.parse("x1*x2^-1 + x1*x3^-1 + x2*x1^-1", S3)
    assert p.leading_term()[0] == (1, 0, -1)


def test_zero_has_no_initial_exponent():
    with pytest.raises(ZeroPolynomial):
        LaurentPolynomial.zero(S3).initial_exponent()


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        LaurentPolynomial.parse("x1", S3) + LaurentPolynomial.parse("x1", VariableShape(1, 2))


def test_negative_monomial_power():
    m = LaurentPolynomial.parse("2*x1*x2^-3", S3)
    assert m ** -2 == LaurentPolynomial.parse("1/4*x1^-2*x2^6", S3)


@given(laurent_polys(3), laurent_polys(3), laurent_polys(3))
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert (a - a).is_zero()


@given(laurent_polys(3), laurent_polys(3),
       st.tuples(nonzero_rationals, nonzero_rationals, nonzero_rationals))
def test_evaluation_is_a_homomorphism(a, b, pt):
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)


@given(laurent_polys(3))
def test_format_parse_round_trip(p):
    assert LaurentPolynomial.parse(p.format(), S3) == p


@given(laurent_polys(2), st.tuples(nonzero_rationals, nonzero_rationals))
def test_matches_sympy(p, pt):
    x1, x2 = sympy.symbols("x1 x2")
    expr = sympy.sympify(p.format().replace("^", "**"), locals={"x1": x1, "x2": x2})
    value = expr.subs({x1: sympy.Rational(pt[0].numerator, pt[0].denominator),
                       x2: sympy.Rational(pt[1].numerator, pt[1].denominator)})
    got = Fraction(p.evaluate(pt))
    assert sympy.Rational(got.numerator, got.denominator) == value


def test_exact_evaluation_with_ints():
    p = LaurentPolynomial.parse("x1^-1 + x2^-1", VariableShape(1, 2))
    assert p.evaluate([2, 3]) == Fraction(5, 6)
