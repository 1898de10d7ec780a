"""Equal-atom unit cells, simulated reflection magnitudes and triplet phases.

For reciprocal vectors v1, v2 the structure factor of a*v1 + b*v2 is
E = sum_j x_j^a y_j^b with x_j = exp(2 pi i v1.r_j) and y_j = exp(2 pi i v2.r_j),
so |E|^2 is the observable q_{a,b} at (X, Y).
"""

from __future__ import annotations

import cmath
import math
import random
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import FileFormatError, InputError, MissingObservable
from .exactnum import format_rational, parse_rational
from .observables import E2_value, ObservableIndex
from .reduction import condition_number, cos_triplet_phase, e2_evaluation, required_observables

TRIPLET_KEYS = (ObservableIndex((1, 0)), ObservableIndex((0, 1)), ObservableIndex((1, 1)))


@dataclass(frozen=True)
class UnitCell:
    atoms: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def __post_init__(self):
        if not self.atoms:
            raise InputError("a unit cell needs at least one atom")
        for pos in self.atoms:
            if len(pos) != 3 or not all(0 <= c < 1 for c in pos):
                raise InputError(f"fractional coordinates must lie in [0, 1): {pos}")

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def degenerate(self) -> bool:
        return len(set(self.atoms)) < len(self.atoms)

    @classmethod
    def random(cls, n: int, rng: random.Random, denominator: int = 97) -> "UnitCell":
        return cls(tuple(
            tuple(Fraction(rng.randrange(denominator), denominator) for _ in range(3))
            for _ in range(n)
        ))

    def to_text(self) -> str:
        return "\n".join(" ".join(format_rational(c) for c in a) for a in self.atoms) + "\n"


def parse_atoms(text: str, path: str | None = None) -> UnitCell:
    atoms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FileFormatError(f"expected three coordinates, found {len(parts)}", lineno, path)
        try:
            pos = tuple(Fraction(parse_rational(p)) for p in parts)
        except InputError as exc:
            raise FileFormatError(str(exc), lineno, path) from None
        if not all(0 <= c < 1 for c in pos):
            raise FileFormatError("fractional coordinates must lie in [0, 1)", lineno, path)
        atoms.append(pos)
    if not atoms:
        raise FileFormatError("no atoms found", None, path)
    return UnitCell(tuple(atoms))


def load_atoms(path: str | Path) -> UnitCell:
    return parse_atoms(Path(path).read_text(encoding="utf-8"), str(path))


@dataclass
class ReflectionSet:
    """Squared magnitudes keyed by canonical (a, b)."""

    entries: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)
    path: str | None = None

    def source(self, key) -> str:
        idx = ObservableIndex.of(key)
        line = self.lines.get(idx)
        return f"{self.path or '<input>'}:{line}" if line is not None else "<memory>"

    def __setitem__(self, key, value):
        idx = ObservableIndex.of(key)
        if value < 0:
            raise InputError(f"squared magnitude of {idx} is negative")
        self.entries[idx] = value

    def __getitem__(self, key):
        return self.entries[ObservableIndex.of(key)]

    def __contains__(self, key) -> bool:
        return ObservableIndex.of(key) in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def keys(self):
        return sorted(self.entries)

    def to_text(self) -> str:
        lines = []
        for idx in self.keys():
            v = self.entries[idx]
            value = repr(v) if isinstance(v, float) else format_rational(v)
            lines.append(f"{idx.r[0]} {idx.r[1]} {value}")
        return "\n".join(lines) + "\n"


def parse_reflections(text: str, path: str | None = None) -> ReflectionSet:
    refl = ReflectionSet(path=path)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FileFormatError(f"expected 'a b value', found {len(parts)} fields", lineno, path)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise FileFormatError("indices must be integers", lineno, path) from None
        value = _parse_value(parts[2], lineno, path)
        if value < 0:
            raise FileFormatError("squared magnitude must be nonnegative", lineno, path)
        idx = ObservableIndex((a, b))
        if idx in refl.entries and refl.entries[idx] != value:
            raise FileFormatError(f"conflicting values for {idx}", lineno, path)
        refl.entries[idx] = value
        refl.lines.setdefault(idx, lineno)
    return refl


def _parse_value(token: str, lineno: int, path):
    try:
        return parse_rational(token)
    except InputError:
        pass
    try:
        v = float(token)
    except ValueError:
        raise FileFormatError(f"malformed value {token!r}", lineno, path) from None
    if not math.isfinite(v):
        raise FileFormatError(f"non-finite value {token!r}", lineno, path)
    return v


def load_reflections(path: str | Path) -> ReflectionSet:
    return parse_reflections(Path(path).read_text(encoding="utf-8"), str(path))


def needed_keys(n: int) -> list[ObservableIndex]:
    keys = set(TRIPLET_KEYS)
    if n in (2, 3, 4):
        keys |= set(required_observables(n))
    return sorted(keys)


@dataclass
class Simulation:
    reflections: ReflectionSet
    e2: object
    cos_phi: object
    mode: str
    x: list = field(default_factory=list)
    y: list = field(default_factory=list)

    def report(self) -> dict:
        return {
            "mode": self.mode,
            "n": len(self.x),
            "e2_true": _jsonable(self.e2),
            "cos_phi_true": _jsonable(self.cos_phi),
            "reflections": len(self.reflections),
        }


def _jsonable(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    return v


def _dot(v: Sequence[int], r: Sequence[Fraction]) -> Fraction:
    return sum(Fraction(a) * b for a, b in zip(v, r))


def _power_sum(x, y, a, b):
    return sum(xx ** a * yy ** b for xx, yy in zip(x, y))


def simulate(
    cell: UnitCell,
    v1: Sequence[int],
    v2: Sequence[int],
    *,
    mode: str = "float",
    keys: Iterable | None = None,
    rng: random.Random | None = None,
) -> Simulation:
    """Squared magnitudes for the needed (a, b) plus the true E_2 and cos(phi).

    ``mode="rational"`` replaces the unit-circle values by random positive
    rationals; observables and E_2 are then exact.
    """
    if len(v1) != 3 or len(v2) != 3:
        raise InputError("reciprocal vectors need three integer components")
    n = cell.n
    keys = [ObservableIndex.of(k) for k in keys] if keys is not None else needed_keys(n)
    if mode == "float":
        x = [cmath.exp(2j * math.pi * float(_dot(v1, r))) for r in cell.atoms]
        y = [cmath.exp(2j * math.pi * float(_dot(v2, r))) for r in cell.atoms]
        refl = ReflectionSet()
        for idx in keys:
            a, b = idx.r
            refl.entries[idx] = abs(_power_sum(x, y, a, b)) ** 2
        triple = _power_sum(x, y, 1, 0) * _power_sum(x, y, 0, 1) * _power_sum(x, y, -1, -1)
        e2 = 2 * triple.real
        mags = abs(triple)
        cos_phi = e2 / (2 * mags) if mags > 0 else float("nan")
        if n == 1:
            cos_phi = 1.0
        return Simulation(refl, e2, cos_phi, mode, x, y)
    if mode == "rational":
        rng = rng or random.Random(0)
        x = [Fraction(rng.randint(1, 40), rng.randint(1, 40)) for _ in range(n)]
        y = [Fraction(rng.randint(1, 40), rng.randint(1, 40)) for _ in range(n)]
        refl = ReflectionSet()
        for idx in keys:
            a, b = idx.r
            refl.entries[idx] = _power_sum(x, y, a, b) * _power_sum(x, y, -a, -b)
        e2 = E2_value(x, y)
        prod = refl[(1, 0)] * refl[(0, 1)] * refl[(1, 1)]
        cos_phi = float(e2) / (2 * math.sqrt(prod)) if prod > 0 else float("nan")
        return Simulation(refl, e2, cos_phi, mode, x, y)
    raise InputError(f"unknown simulation mode {mode!r}")


@dataclass
class PhaseResult:
    n: int
    e2: object
    cos_phi: object
    uncorrected: object
    inputs: dict
    condition: float | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "condition_R": self.condition,
            "e2": _jsonable(self.e2),
            "cos_phi": _jsonable(self.cos_phi),
            "e2_without_diagonal_term": _jsonable(self.uncorrected),
            "inputs": {str(k): _jsonable(v) for k, v in self.inputs.items()},
        }


def phase_from_reflections(n: int, refl: ReflectionSet | Mapping, *, tol: float = 1e-6) -> PhaseResult:
    """E_2 and cos(phi) from squared magnitudes."""
    entries = refl.entries if isinstance(refl, ReflectionSet) else {ObservableIndex.of(k): v for k, v in refl.items()}
    missing = [k for k in needed_keys(n) if k not in entries]
    if missing:
        raise MissingObservable(missing)
    used = {k: entries[k] for k in needed_keys(n)}
    ev = e2_evaluation(n, used)
    float_mode = any(isinstance(v, float) for v in used.values())
    mags = [entries[k] for k in TRIPLET_KEYS]
    cond = None
    if float_mode:
        cond = condition_number(n, used)
        if cond * sys.float_info.epsilon > tol:
            warnings.warn(
                f"R is ill-conditioned (condition {cond:.2g}); cos(phi) may be off by more than {tol:g}",
                RuntimeWarning,
            )
        cos_phi = cos_triplet_phase(*(math.sqrt(float(m)) for m in mags), float(ev.value), clamp=True, tol=tol)
    else:
        cos_phi = _exact_cos(mags, ev.value)
    return PhaseResult(n, ev.value, cos_phi, ev.uncorrected, used, cond)


def _exact_cos(mags, e2):
    """cos(phi) for rational data; rational when the magnitude product is a square."""
    prod = Fraction(mags[0]) * mags[1] * mags[2]
    if prod <= 0:
        return cos_triplet_phase(0, 1, 1, e2)
    num, den = math.isqrt(prod.numerator), math.isqrt(prod.denominator)
    if num * num == prod.numerator and den * den == prod.denominator:
        return cos_triplet_phase(Fraction(num, den), 1, 1, Fraction(e2))
    return cos_triplet_phase(math.sqrt(prod), 1, 1, float(e2))
