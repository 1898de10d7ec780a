import json
import random
from fractions import Fraction

import pytest
import sympy

from tripletphase.checks import pair_observables, random_point
from tripletphase.errors import MissingObservable, SingularR, UnsupportedN, InputError, ZeroMagnitude
from tripletphase.observables import E2_value, Expr, ObservableIndex
from tripletphase.reduction import (
    berkowitz_det,
    cos_triplet_phase,
    e2_evaluation,
    e2_from_values,
    emit_formula,
    offsets,
    required_observables,
    row_vector_labels,
    solve_lambdas,
)


def test_offsets_and_required():
    assert list(offsets(3)) == [-3, -2, -1, 0, 1, 2]
    req = {str(i) for i in required_observables(2)}
    assert req == {"q[1,0]", "q[2,0]", "q[1,-1]", "q[0,1]"}


def test_worked_point_n2():
    ev = e2_evaluation(2, pair_observables([2, 1], [3, 1], 2))
    assert ev.value == 28 == E2_value([2, 1], [3, 1])
    assert ev.uncorrected == 38


@pytest.mark.parametrize("n", [2, 3, 4])
def test_e2_from_values_exact(n):
    rng = random.Random(100 + n)
    done = 0
    while done < 8:
        x, y = random_point(rng, n), random_point(rng, n)
        try:
            got = e2_from_values(n, pair_observables(x, y, n))
        except (SingularR, ZeroDivisionError):
            continue
        assert got == E2_value(x, y)
        done += 1


def test_singular_R():
    with pytest.raises(SingularR):
        e2_from_values(3, pair_observables([1, 1, 2], [1, 2, 3], 3))


def test_missing_observable_names_index():
    q = pair_observables([2, 3], [5, 7], 2)
    del q[ObservableIndex((1, -1))]
    with pytest.raises(MissingObservable) as info:
        e2_from_values(2, q)
    assert [str(m) for m in info.value.missing] == ["q[1,-1]"]


def test_unsupported_n():
    with pytest.raises(InputError):
        solve_lambdas(5, {})


def test_berkowitz_matches_sympy():
    rng = random.Random(4)
    for size in range(1, 6):
        A = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(size)] for _ in range(size)]
        ref = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in r] for r in A]).det()
        got = Fraction(berkowitz_det(A))
        assert sympy.Rational(got.numerator, got.denominator) == ref


@pytest.mark.parametrize("n", [2, 3, 4])
def test_emitted_formula(n):
    f = emit_formula(n)
    data = json.loads(json.dumps(f.to_json()))
    assert data["schema"] == "tripletphase.formula/1"
    assert data["n"] == n
    back = Expr.from_json(data["expression"])
    rng = random.Random(n)
    checked = 0
    while checked < 3:
        x, y = random_point(rng, n), random_point(rng, n)
        q = pair_observables(x, y, n)
        try:
            value = f.evaluate(q)
        except ZeroDivisionError:
            continue
        assert value == E2_value(x, y)
        assert back.evaluate(q) == value
        checked += 1


def test_emitted_formula_n2_is_the_polynomial():
    f = emit_formula(2)
    num, den = f.expression.expand(2, 2)
    q = Expr.q
    p_num, p_den = (2 * (q((1, 0)) + q((0, 1)) + q((1, 1))) - 8).expand(2, 2)
    assert num * p_den == p_num * den


def test_row_vector_labels():
    assert row_vector_labels(3) == ["e2", "e1", "6q1", "6q1", "e1", "e2"]


def test_cos_triplet_phase():
    assert cos_triplet_phase(1, 2, 3, 6) == Fraction(1, 2)
    with pytest.raises(ZeroMagnitude):
        cos_triplet_phase(0, 1, 1, 1)
    with pytest.warns(RuntimeWarning):
        assert cos_triplet_phase(1.0, 1.0, 1.0, 2.5, clamp=True) == 1.0


def _rho(point):
    return [a / b for i, a in enumerate(point) for j, b in enumerate(point) if i != j]


@pytest.mark.parametrize("n, x, y", [
    (2, [Fraction(3), Fraction(1, 2)], [Fraction(3), Fraction(1, 2)]),
    (3, [Fraction(2), Fraction(5, 3), Fraction(1, 7)], [Fraction(4), Fraction(1, 3), Fraction(9, 2)]),
    (4, [Fraction(2), Fraction(5, 3), Fraction(1, 7), Fraction(3, 4)],
     [Fraction(1), Fraction(6), Fraction(2, 5), Fraction(7, 3)]),
])
def test_lambda_recombination(n, x, y):
    lam = solve_lambdas(n, pair_observables(x, y, n))
    basis = {i: _rho([v ** i for v in x]) for i in offsets(n)}
    combo = [sum(l * basis[i][k] for l, i in zip(lam, offsets(n))) for k in range(n * (n - 1))]
    assert combo == _rho(y)
