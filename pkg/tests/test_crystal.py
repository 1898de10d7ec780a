import math
import random
from fractions import Fraction

import pytest

from tripletphase.crystal import (
    ReflectionSet,
    UnitCell,
    needed_keys,
    parse_atoms,
    parse_reflections,
    phase_from_reflections,
    simulate,
)
from tripletphase.reduction import condition_number
from tripletphase.errors import FileFormatError, InputError, MissingObservable, SingularR


def test_parse_atoms_and_errors():
    cell = parse_atoms("# cell\n0 0 0\n1/2 1/3 0\n")
    assert cell.n == 2 and cell.atoms[1] == (Fraction(1, 2), Fraction(1, 3), 0)
    with pytest.raises(FileFormatError) as info:
        parse_atoms("0 0 0\n1 0\n", "cell.txt")
    assert info.value.line == 2 and "cell.txt:2" in str(info.value)
    with pytest.raises(FileFormatError):
        parse_atoms("0 0 1\n")


def test_parse_reflections():
    refl = parse_reflections("1 0 4\n-1 0 4\n0 1 2.5\n", "r.txt")
    assert refl[(1, 0)] == 4 and refl[(0, -1)] == 2.5
    assert refl.source((-1, 0)) == "r.txt:1"
    with pytest.raises(FileFormatError):
        parse_reflections("1 0 4\n-1 0 5\n")
    with pytest.raises(FileFormatError):
        parse_reflections("1 0 -1\n")
    with pytest.raises(FileFormatError):
        parse_reflections("1 x 1\n")


def test_reflection_text_round_trip():
    refl = ReflectionSet()
    refl[(1, 0)] = Fraction(3, 2)
    refl[(2, -1)] = 0.25
    assert parse_reflections(refl.to_text()).entries == refl.entries


def test_single_atom_sanity():
    sim = simulate(UnitCell(((0, 0, 0),)), [1, 2, 3], [0, 1, 0])
    assert all(abs(v - 1) < 1e-12 for v in sim.reflections.entries.values())
    assert sim.cos_phi == 1.0


def test_two_atom_example():
    cell = UnitCell(((0, 0, 0), (Fraction(1, 2), 0, 0)))
    sim = simulate(cell, [1, 0, 0], [2, 0, 0])
    r = sim.reflections
    assert abs(r[(1, 0)]) < 1e-12 and abs(r[(0, 1)] - 4) < 1e-12 and abs(r[(1, 1)]) < 1e-12
    assert abs(sim.e2) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_float_round_trip(n):
    rng = random.Random(40 + n)
    done = 0
    while done < 5:
        cell = UnitCell.random(n, rng)
        sim = simulate(cell, [rng.randint(-3, 3) for _ in range(3)], [rng.randint(-3, 3) for _ in range(3)])
        try:
            res = phase_from_reflections(n, sim.reflections)
        except (SingularR, ZeroDivisionError, InputError):
            continue
        if not math.isfinite(sim.cos_phi):
            continue
        assert abs(res.cos_phi - sim.cos_phi) < 1e-6
        done += 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rational_mode_exact(n):
    rng = random.Random(n)
    cell = UnitCell.random(n, rng)
    sim = simulate(cell, [1, 0, 0], [0, 1, 0], mode="rational", rng=rng)
    assert phase_from_reflections(n, sim.reflections).e2 == sim.e2


def test_degenerate_cell_singular():
    cell = UnitCell(((0, 0, 0),) * 3)
    assert cell.degenerate
    sim = simulate(cell, [1, 0, 0], [0, 1, 0])
    with pytest.raises(SingularR):
        phase_from_reflections(3, sim.reflections)


def test_missing_index():
    rng = random.Random(9)
    sim = simulate(UnitCell.random(3, rng), [1, 2, 0], [0, 1, 3])
    del sim.reflections.entries[needed_keys(3)[0]]
    with pytest.raises(MissingObservable):
        phase_from_reflections(3, sim.reflections)


def test_condition_reported_and_warned():
    rng = random.Random(19)
    worst = None
    for _ in range(200):
        cell = UnitCell.random(4, rng)
        sim = simulate(cell, [rng.randint(-4, 4) for _ in range(3)], [rng.randint(-4, 4) for _ in range(3)])
        try:
            cond = condition_number(4, sim.reflections.entries)
        except InputError:
            continue
        if math.isfinite(cond) and cond > 1e11:
            worst = sim
            break
    assert worst is not None
    with pytest.warns(RuntimeWarning, match="ill-conditioned"):
        res = phase_from_reflections(4, worst.reflections)
    assert res.condition > 1e11
