import pytest
from hypothesis import given

from tripletphase.errors import InitialExponentNotInS, NotInSemigroup, NotInvariant, UnsupportedN, InputError
from tripletphase.group import reynolds
from tripletphase.laurent import LaurentPolynomial, VariableShape
from tripletphase.observables import e_i_poly, generator_poly
from tripletphase.sagbi import (
    decompose_initial,
    e_symbolic,
    eliminate_p_parts,
    generator_expressions_in_q,
    in_semigroup,
    n4_relations,
    recombine,
    reduce_c2_squared,
    sagbi_basis,
    subduct,
    substitute_generators,
)
from tripletphase.symfun import SymPoly

from strategies import degree_zero_polys

# Generator expressions of E_2(X, X^i), i = 3, 4, 5, at n = 4 in a second, equally valid form.
E3="2*c1^4 + 4*c1^3 - 7*c1^2*c2 + 3*c1^2*p - 41*c1^2 - 31*c1*c2 + 7*c1*c3 - 2*c1*p^2 + 40*c1*p - 154*c1 + 8*c2*p - 28*c2 + 2*c3*p + 24*c3 - 8*p^2 + 72*p - 136"
E4="2*c1^5 + 4*c1^4 - 9*c1^3*c2 + 13*c1^3*p - 131*c1^3 - 80*c1^2*c2 + 9*c1^2*c3 - 7*c1^2*p^2 + 144*c1^2*p - 651*c1^2 + 24*c1*c2*p - 186*c1*c2 + 7*c1*c3*p + 43*c1*c3 - 29*c1*p^2 + 379*c1*p - 1136*c1 - 5*c2*c3 + 21*c2*p - 120*c2 + 3*c3*p + 78*c3 - 34*p^2 + 334*p - 688"
E5="2*c1^6 + 4*c1^5 - 11*c1^4*c2 + 27*c1^4*p - 243*c1^4 - 142*c1^3*c2 + 11*c1^3*c3 - 14*c1^3*p^2 + 289*c1^3*p - 1317*c1^3 + 46*c1^2*c2*p - 429*c1^2*c2 + 14*c1^2*c3*p + 53*c1^2*c3 - 66*c1^2*p^2 + 892*c1^2*p - 2830*c1^2 - 17*c1*c2*c3 + 81*c1*c2*p - 471*c1*c2 + 19*c1*c3*p + 135*c1*c3 + 2*c1*p^3 - 137*c1*p^2 + 1286*c1*p - 3039*c1 - 2*c2^3 - 35*c2*c3 + 27*c2*p - 167*c2 + 3*c3^2 - 2*c3*p^2 - c3*p + 171*c3 + 8*p^3 - 150*p^2 + 856*p - 1402"


@pytest.mark.parametrize("n, count", [(2, 1), (3, 2), (4, 4)])
def test_basis_sizes(n, count):
    assert len(sagbi_basis(n).names) == count


def test_semigroup_membership():
    assert in_semigroup((1, 0, -1))
    assert in_semigroup((1, 1, -1, -1))
    assert not in_semigroup((0, 1, -1))
    assert not in_semigroup((0, 0, 1, -1))
    assert not in_semigroup((1, 0, 0))


@pytest.mark.parametrize(
    "a, n",
    [((3, -3), 2), ((2, 0, -2), 3), ((2, 1, -1, -2), 4), ((3, 2, -2, -3), 4), ((1, 1, -1, -1), 4)],
)
def test_decompose_recombine(a, n):
    mult = decompose_initial(a, n)
    assert all(v >= 0 for v in mult.values())
    assert recombine(mult, n) == a


def test_decompose_outside_semigroup():
    with pytest.raises(NotInSemigroup):
        decompose_initial((0, 1, -1), 3)


def test_n3_examples():
    assert e_symbolic(3, 1).format(factor_content=True) == "2*(c1^2 + c1 - c2)"
    assert e_symbolic(3, 2) == SymPoly.parse("2*c1^3 + 5*c1^2 - 5*c1*c2 + 9*c1 - 12*c2 + 18")


def expand_generators(expr: SymPoly, n: int) -> LaurentPolynomial:
    """Substitute every c_k and p by its polynomial in x1..xn."""
    total = LaurentPolynomial.zero(VariableShape(1, n))
    for mono, c in expr.terms.items():
        term = LaurentPolynomial.constant(VariableShape(1, n), c)
        for name, k in mono:
            term = term * generator_poly(name, n) ** k
        total = total + term
    return total


def test_n4_relations_are_identities():
    for key, rel in n4_relations().items():
        assert expand_generators(SymPoly.parse(key) - rel, 4).is_zero(), key


def test_p_elimination_identity():
    num, den = eliminate_p_parts()
    assert expand_generators(SymPoly.var("p") * den - num, 4).is_zero()


@pytest.mark.parametrize("i, text", [(3, E3), (4, E4), (5, E5)])
def test_alternative_forms_agree(i, text):
    alt = SymPoly.parse(text)
    assert substitute_generators(alt, 4) == e_i_poly(4, i)
    assert reduce_c2_squared(alt) == reduce_c2_squared(e_symbolic(4, i))


@pytest.mark.parametrize("n", [2, 3, 4])
@given(data=degree_zero_polys(4))
def test_subduction_round_trip(n, data):
    shape = VariableShape(1, n)
    f = LaurentPolynomial(shape, {e[:n - 1] + (-sum(e[:n - 1]),): c for e, c in data.items()})
    if f.is_zero():
        return
    r = reynolds(f)
    res = subduct(r, n)
    assert substitute_generators(res.expression, n) == r


def test_subduct_rejects_non_invariant():
    with pytest.raises(NotInvariant):
        subduct(LaurentPolynomial.parse("x1/x2", VariableShape(1, 3)), 3)


def test_generator_q_expressions_evaluate():
    from fractions import Fraction

    from tripletphase.observables import observable_values
    from tripletphase.sagbi import c_symbols_in_q

    x = [Fraction(2), Fraction(1, 3), Fraction(5, 2), Fraction(7, 4)]
    env = observable_values(x, None, range(1, 13))
    for name, expr in generator_expressions_in_q(4).items():
        gen = sagbi_basis(4).generator(name) if name in sagbi_basis(4).names else None
        if gen is not None:
            assert expr.evaluate(env) == gen.evaluate(x), name
