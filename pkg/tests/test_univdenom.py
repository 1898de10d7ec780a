import random

import pytest

from tripletphase.errors import BudgetExceeded, NotInvariant, RequiresNAtLeast3
from tripletphase.group import embedded_group, reynolds
from tripletphase.laurent import LaurentPolynomial, VariableShape
from tripletphase.observables import observable_values
from tripletphase.univdenom import (
    algorithm31,
    build_D,
    build_E,
    classify_D,
    lift,
    phi,
    verify_E_property,
    verify_lemma_D,
)

S2 = VariableShape(1, 2)


def test_build_D_requires_n3():
    with pytest.raises(RequiresNAtLeast3):
        build_D(2)


def test_phi_D_nonzero_and_identity_preserves():
    D = build_D(3)
    assert not D.phi_is_zero()
    identity = next(h for h, g in embedded_group(3).items() if g.is_identity())
    assert classify_D(3, identity, D) == "preserved"


def test_single_sweep():
    rep = verify_lemma_D(3)
    assert (rep.checked, rep.preserved, rep.annihilated, rep.violations) == (720, 12, 708, [])


def test_pair_sweep():
    rep = verify_E_property(3, 2)
    assert rep.ok and rep.checked == 720 ** 2
    assert rep.preserved == 12 and rep.annihilated == 518388


def test_lift_maps_back():
    f = LaurentPolynomial.parse("x1^2*x2^-2 + x2^2*x1^-2", S2)
    assert phi(lift(f), 2) == f


@pytest.mark.parametrize(
    "text, expected",
    [("x1*x2^-1 + x2*x1^-1", "q[1] - 2"), ("x1^2*x2^-2 + x2^2*x1^-2", None)],
)
def test_algorithm31_n2(text, expected):
    f = LaurentPolynomial.parse(text, S2)
    expr = algorithm31(f)
    if expected:
        assert expr.to_text() == expected
    rng = random.Random(2)
    for _ in range(10):
        x = [rng.randint(1, 9), rng.randint(10, 19)]
        assert expr.evaluate(observable_values(x, None, [1, 2])) == f.evaluate(x)


def test_algorithm31_budget():
    f = reynolds(LaurentPolynomial.parse("x1*x2^-1", VariableShape(1, 3)))
    with pytest.raises(BudgetExceeded):
        algorithm31(f)


def test_algorithm31_rejects_non_invariant():
    with pytest.raises(NotInvariant):
        algorithm31(LaurentPolynomial.parse("x1*x2^-1", S2))
