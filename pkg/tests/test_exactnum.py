from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from tripletphase.errors import InputError, SingularMatrix
from tripletphase.exactnum import (
    CyclotomicInt,
    RationalMatrix,
    cyclotomic_polynomial,
    format_rational,
    normalize,
    parse_rational,
    solve_linear,
    solve_linear_float,
)

from strategies import nonzero_rationals


@pytest.mark.parametrize(
    "text, value",
    [("3", 3), ("-4/6", Fraction(-2, 3)), (" 10/5 ", 2), ("+7/3", Fraction(7, 3))],
)
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["", "1/0", "a", "1/2/3", "3/", "0.5"])
def test_parse_rational_rejects(text):
    with pytest.raises(InputError):
        parse_rational(text)


@given(nonzero_rationals)
def test_format_parse_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_normalize_collapses_integral_fractions():
    assert type(normalize(Fraction(4, 2))) is int
    assert normalize(Fraction(1, 2)) == Fraction(1, 2)


def test_solve_linear_matches_sympy():
    rows = [[2, 1, -1], [Fraction(1, 3), 4, 2], [5, -2, Fraction(7, 2)]]
    b = [1, Fraction(2, 5), -3]
    x = solve_linear(RationalMatrix.from_rows(rows), b)
    ref = sympy.Matrix(rows).LUsolve(sympy.Matrix(b))
    assert [sympy.Rational(v.numerator, v.denominator) if isinstance(v, Fraction) else v for v in x] == list(ref)


def test_solve_linear_singular():
    with pytest.raises(SingularMatrix):
        solve_linear(RationalMatrix.from_rows([[1, 2], [2, 4]]), [1, 2])


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-9, 9), min_size=3, max_size=3))
def test_solve_linear_property(rows, b):
    A = RationalMatrix.from_rows(rows)
    if sympy.Matrix(rows).det() == 0:
        with pytest.raises(SingularMatrix):
            solve_linear(A, b)
        return
    x = solve_linear(A, b)
    assert A.matvec(x) == b
    xf = solve_linear_float([[float(v) for v in r] for r in rows], [float(v) for v in b])
    assert all(abs(a - float(c)) < 1e-8 * (1 + abs(float(c))) for a, c in zip(xf, x))


def test_solve_linear_float_singular():
    with pytest.raises(SingularMatrix):
        solve_linear_float([[1.0, 2.0], [2.0, 4.0]], [1.0, 2.0])


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6, 8, 9, 12, 13, 15])
def test_cyclotomic_polynomial_matches_sympy(k):
    x = sympy.Symbol("x")
    ref = sympy.Poly(sympy.cyclotomic_poly(k, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(k)) == [int(c) for c in ref]


def test_cyclotomic_arithmetic_and_reduction():
    k = 5
    z = CyclotomicInt.monomial(k, 1)
    one = CyclotomicInt.from_int(k, 1)
    total = one
    for e in range(1, k):
        total = total + CyclotomicInt.monomial(k, e)
    assert total.is_zero_mod_phi()  # 1 + z + ... + z^4 = 0
    assert not (one - z).is_zero_mod_phi()
    assert (z ** 5).equal_mod_phi(one)
    assert z.conjugate().equal_mod_phi(CyclotomicInt.monomial(k, -1))


@given(st.lists(st.integers(0, 12), min_size=1, max_size=5), st.integers(1, 12))
def test_cyclotomic_frobenius_matches_complex(exps, j):
    import cmath

    k = 13
    g = CyclotomicInt.from_exponents(k, exps)
    z = cmath.exp(2j * cmath.pi / k)
    expected = sum(z ** (j * e) for e in exps)
    assert abs(g.frobenius(j).evaluate_complex(z) - expected) < 1e-9
