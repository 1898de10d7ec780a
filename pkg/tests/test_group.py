import random
from itertools import permutations

import pytest
from hypothesis import given

from tripletphase.errors import NotDegreeZero, RequiresNAtLeast3
from tripletphase.group import (
    GroupElement,
    act,
    adjacent,
    embedded_group,
    group_elements,
    is_invariant,
    lambda_permutation,
    lambda_set,
    opposite,
    preserves_relations,
    reynolds,
)
from tripletphase.laurent import LaurentPolynomial, VariableShape

from strategies import degree_zero_polys, laurent_polys


@pytest.mark.parametrize("n", [2, 3, 4])
def test_group_order(n):
    import math

    assert len(set(group_elements(n))) == 2 * math.factorial(n)


@given(laurent_polys(3))
def test_action_is_a_homomorphism(p):
    g, h = GroupElement.from_cycle(3, 1, 2), GroupElement.from_cycle(3, 1, 2, 3, epsilon=-1)
    assert act(g * h, p) == act(g, act(h, p))


@given(degree_zero_polys(3))
def test_reynolds_invariant_and_idempotent(p):
    r = reynolds(p)
    assert is_invariant(r)
    assert reynolds(r) == r


def test_reynolds_needs_degree_zero():
    with pytest.raises(NotDegreeZero):
        reynolds(LaurentPolynomial.parse("x1", VariableShape(1, 2)))


def test_lambda_relations():
    assert opposite((1, 2), (2, 1))
    assert not opposite((1, 2), (1, 3))
    assert adjacent((1, 2), (2, 3))
    assert adjacent((1, 2), (3, 1))
    assert not adjacent((1, 2), (1, 3))
    assert not adjacent((1, 2), (2, 1))
    assert len(lambda_set(4)) == 12


def test_embedding_is_injective_for_n3():
    assert len(embedded_group(3)) == 12
    assert len({lambda_permutation(g) for g in group_elements(3)}) == 12


def test_relation_preservers_n3():
    keep = [h for h in permutations(range(6)) if preserves_relations(h, 3)]
    assert set(keep) == set(embedded_group(3))


def test_relation_preservers_sample_n4():
    G = set(embedded_group(4))
    assert all(preserves_relations(h, 4) for h in G)
    rng = random.Random(1)
    others = 0
    for _ in range(300):
        h = list(range(12))
        rng.shuffle(h)
        h = tuple(h)
        if h not in G:
            others += 1
            assert not preserves_relations(h, 4)
    assert others > 0


def test_relations_need_n3():
    with pytest.raises(RequiresNAtLeast3):
        preserves_relations((0, 1), 2)
