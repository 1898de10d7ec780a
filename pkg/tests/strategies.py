"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from tripletphase.laurent import LaurentPolynomial, VariableShape

nonzero_rationals = st.builds(
    Fraction,
    st.integers(-12, 12).filter(bool),
    st.integers(1, 12),
)
positive_rationals = st.builds(Fraction, st.integers(1, 25), st.integers(1, 25))


def laurent_polys(n: int, m: int = 1, max_terms: int = 4, bound: int = 2):
    shape = VariableShape(m, n)
    exps = st.tuples(*[st.integers(-bound, bound)] * shape.size)
    return st.dictionaries(exps, st.integers(-6, 6), max_size=max_terms).map(
        lambda d: LaurentPolynomial(shape, d)
    )


def degree_zero_polys(n: int, max_terms: int = 3, bound: int = 2):
    shape = VariableShape(1, n)

    def close(e):
        return tuple(e) + (-sum(e),)

    exps = st.tuples(*[st.integers(-bound, bound)] * (n - 1)).map(close)
    return st.dictionaries(exps, st.integers(-5, 5), min_size=1, max_size=max_terms).map(
        lambda d: LaurentPolynomial(shape, d)
    )
