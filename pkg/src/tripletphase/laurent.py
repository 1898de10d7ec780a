"""Sparse Laurent polynomials in ``m`` arrays of ``n`` variables.

A monomial is stored as the flattened exponent grid ``(a_11..a_1n, a_21..)``,
so Python's tuple comparison is exactly the lexicographic order used for
initial exponents (array 1 first, index 1 first within an array).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from operator import add as _add
from typing import Iterable, Mapping, Sequence

from ._parsing import parse_with
from .errors import (
    InputError,
    PolynomialSyntaxError,
    ShapeMismatch,
    UnknownVariable,
    ZeroCoordinate,
    ZeroPolynomial,
)
from .exactnum import as_rational, format_rational, normalize


@dataclass(frozen=True)
class VariableShape:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 2:
            raise InputError(f"invalid shape m={self.m}, n={self.n}")

    @property
    def size(self) -> int:
        return self.m * self.n

    def index(self, h: int, j: int) -> int:
        """Flat position of x_{h,j} (both 1-based)."""
        if not (1 <= h <= self.m and 1 <= j <= self.n):
            raise UnknownVariable(f"x{h}_{j} is outside shape m={self.m}, n={self.n}")
        return (h - 1) * self.n + (j - 1)

    def var_name(self, pos: int) -> str:
        h, j = divmod(pos, self.n)
        return f"x{j + 1}" if self.m == 1 else f"x{h + 1}_{j + 1}"


def shape_of(m: int, n: int) -> VariableShape:
    return VariableShape(m, n)


@dataclass(frozen=True, order=True)
class ExponentVector:
    exps: tuple[int, ...]
    shape: VariableShape

    def grid(self) -> list[tuple[int, ...]]:
        n = self.shape.n
        return [self.exps[h * n:(h + 1) * n] for h in range(self.shape.m)]

    def degrees(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.grid())

    def is_degree_zero(self) -> bool:
        return not any(self.degrees())

    def __add__(self, other: "ExponentVector") -> "ExponentVector":
        if self.shape != other.shape:
            raise ShapeMismatch("exponent shapes differ")
        return ExponentVector(tuple(map(_add, self.exps, other.exps)), self.shape)


class LaurentPolynomial:
    """Immutable sparse polynomial with rational coefficients.

    ``terms`` maps flattened exponent tuples to nonzero coefficients.
    """

    __slots__ = ("shape", "_terms", "_hash")

    def __init__(self, shape: VariableShape, terms: Mapping[tuple, object] | None = None):
        self.shape = shape
        clean = {}
        if terms:
            size = shape.size
            for e, c in terms.items():
                if c:
                    e = tuple(e)
                    if len(e) != size:
                        raise ShapeMismatch(f"exponent {e} does not fit shape {shape}")
                    clean[e] = normalize(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, shape: VariableShape, terms: dict) -> "LaurentPolynomial":
        # terms must already be canonical (no zeros, tuples of right length)
        obj = cls.__new__(cls)
        obj.shape = shape
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, shape: VariableShape) -> "LaurentPolynomial":
        return cls._raw(shape, {})

    @classmethod
    def constant(cls, shape: VariableShape, c) -> "LaurentPolynomial":
        c = as_rational(c)
        return cls._raw(shape, {(0,) * shape.size: c} if c else {})

    @classmethod
    def monomial(cls, shape: VariableShape, exps: Sequence[int], c=1) -> "LaurentPolynomial":
        return cls(shape, {tuple(exps): as_rational(c)})

    @classmethod
    def variable(cls, shape: VariableShape, h: int, j: int) -> "LaurentPolynomial":
        e = [0] * shape.size
        e[shape.index(h, j)] = 1
        return cls._raw(shape, {tuple(e): 1})

    # -- basic protocol ----------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms in canonical (descending lexicographic) order."""
        return sorted(self._terms.items(), reverse=True)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0,) * self.shape.size in self._terms)

    def constant_term(self):
        return self._terms.get((0,) * self.shape.size, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPolynomial):
            return self.shape == other.shape and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self.format()!r}, m={self.shape.m}, n={self.shape.n})"

    def __str__(self) -> str:
        return self.format()

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            if other.shape != self.shape:
                raise ShapeMismatch(f"shapes {self.shape} and {other.shape} differ")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPolynomial.constant(self.shape, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other._terms) > len(self._terms):
            small, big = self._terms, other._terms
        else:
            small, big = other._terms, self._terms
        out = dict(big)
        for e, c in small.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = normalize(v)
            else:
                out.pop(e, None)
        return LaurentPolynomial._raw(self.shape, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._raw(self.shape, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LaurentPolynomial":
        c = as_rational(c)
        if not c:
            return LaurentPolynomial.zero(self.shape)
        return LaurentPolynomial._raw(
            self.shape, {e: normalize(v * c) for e, v in self._terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        bitems = list(b.items())
        for ea, ca in a.items():
            for eb, cb in bitems:
                e = tuple(map(_add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        out = {e: normalize(c) for e, c in out.items() if c}
        return LaurentPolynomial._raw(self.shape, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self.scale(Fraction(1) / other)
        other = self._coerce(other)
        if len(other._terms) != 1:
            raise InputError("can only divide by a monomial")
        (e, c), = other._terms.items()
        inv = LaurentPolynomial._raw(self.shape, {tuple(-x for x in e): normalize(Fraction(1) / c)})
        return self * inv

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1:
                raise InputError("negative powers only exist for monomials")
            (e, c), = self._terms.items()
            return LaurentPolynomial._raw(
                self.shape, {tuple(k * x for x in e): normalize(Fraction(1) / c ** -k)}
            )
        result = LaurentPolynomial.constant(self.shape, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- order and structure -----------------------------------------------
    def initial_exponent(self) -> ExponentVector:
        if not self._terms:
            raise ZeroPolynomial("the zero polynomial has no initial exponent")
        return ExponentVector(max(self._terms), self.shape)

    def leading_coefficient(self):
        if not self._terms:
            raise ZeroPolynomial("the zero polynomial has no leading coefficient")
        return self._terms[max(self._terms)]

    def leading_term(self) -> tuple[tuple, object]:
        e = max(self._terms) if self._terms else None
        if e is None:
            raise ZeroPolynomial("the zero polynomial has no leading term")
        return e, self._terms[e]

    def is_degree_zero(self) -> bool:
        n = self.shape.n
        for e in self._terms:
            for h in range(self.shape.m):
                if sum(e[h * n:(h + 1) * n]):
                    return False
        return True

    def map_exponents(self, fn, shape: VariableShape | None = None) -> "LaurentPolynomial":
        """Apply an exponent transformation, summing colliding terms."""
        shape = shape or self.shape
        out: dict = {}
        for e, c in self._terms.items():
            f = tuple(fn(e))
            out[f] = out.get(f, 0) + c
        return LaurentPolynomial(shape, out)

    def substitute_powers(self, powers: Sequence[int]) -> "LaurentPolynomial":
        """X_h -> X_h^powers[h] for every array h."""
        if len(powers) != self.shape.m:
            raise ShapeMismatch("need one power per array")
        n = self.shape.n
        scale = [powers[h] for h in range(self.shape.m) for _ in range(n)]
        return self.map_exponents(lambda e: map(int.__mul__, e, scale))

    def collapse_arrays(self, weights: Sequence[int]) -> "LaurentPolynomial":
        """Map every array onto a single array: X_h -> X^weights[h]."""
        m, n = self.shape.m, self.shape.n
        if len(weights) != m:
            raise ShapeMismatch("need one weight per array")
        target = VariableShape(1, n)

        def fold(e):
            return [sum(weights[h] * e[h * n + j] for h in range(m)) for j in range(n)]

        return self.map_exponents(fold, target)

    def embed(self, shape: VariableShape, array: int = 1) -> "LaurentPolynomial":
        """Place a single-array polynomial into array ``array`` of a larger shape."""
        if self.shape.m != 1 or shape.n != self.shape.n:
            raise ShapeMismatch("embed expects a single-array polynomial of matching n")
        off = (array - 1) * shape.n
        pad_l, pad_r = (0,) * off, (0,) * (shape.size - off - shape.n)
        return LaurentPolynomial._raw(shape, {pad_l + e + pad_r: c for e, c in self._terms.items()})

    # -- evaluation --------------------------------------------------------
    def evaluate(self, point):
        """Exact value at a point with nonzero coordinates.

        ``point`` is a flat sequence of length m*n, or a grid of m rows.
        Works with any numeric type supporting ``**`` with negative ints.
        """
        flat = _flatten_point(point, self.shape)
        cache: list[dict] = [dict() for _ in flat]
        total = 0
        for e, c in self._terms.items():
            term = c
            for pos, k in enumerate(e):
                if k:
                    pc = cache[pos]
                    v = pc.get(k)
                    if v is None:
                        v = pc[k] = flat[pos] ** k
                    term = term * v
            total = total + term
        return normalize(total) if isinstance(total, (int, Fraction)) else total

    # -- text --------------------------------------------------------------
    def format(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for e, c in self.items():
            factors = []
            for pos, k in enumerate(e):
                if k:
                    name = self.shape.var_name(pos)
                    factors.append(name if k == 1 else f"{name}^{k}")
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if factors:
                body = "*".join(factors)
                if mag != 1:
                    body = f"{format_rational(mag)}*{body}"
            else:
                body = format_rational(mag)
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    @classmethod
    def parse(cls, text: str, shape: VariableShape | None = None) -> "LaurentPolynomial":
        """Parse the text grammar; ``shape`` is inferred when omitted."""
        if shape is None:
            shape = infer_shape(text)
        return parse_with(text, _LaurentBuilder(shape, text))


_VAR = re.compile(r"x(\d+)(?:_(\d+))?\Z")


def infer_shape(text: str) -> VariableShape:
    m, n = 1, 2
    for name in re.findall(r"[A-Za-z_][A-Za-z0-9_]*", text):
        mt = _VAR.match(name)
        if not mt:
            continue
        if mt.group(2) is None:
            n = max(n, int(mt.group(1)))
        else:
            m = max(m, int(mt.group(1)))
            n = max(n, int(mt.group(2)))
    return VariableShape(m, n)


class _LaurentBuilder:
    def __init__(self, shape: VariableShape, text: str):
        self.shape = shape
        self.text = text

    def const(self, c):
        return LaurentPolynomial.constant(self.shape, c)

    def var(self, name: str, offset: int):
        mt = _VAR.match(name)
        if not mt:
            raise UnknownVariable(f"unknown variable {name!r} at offset {offset}")
        if mt.group(2) is None:
            if self.shape.m != 1:
                raise UnknownVariable(
                    f"variable {name!r} at offset {offset} needs an array index (x<h>_<j>)"
                )
            h, j = 1, int(mt.group(1))
        else:
            h, j = int(mt.group(1)), int(mt.group(2))
        try:
            return LaurentPolynomial.variable(self.shape, h, j)
        except UnknownVariable:
            raise UnknownVariable(f"variable {name!r} at offset {offset} is out of range") from None

    def div(self, a, b, offset):
        if len(b) != 1:
            raise PolynomialSyntaxError("division by a non-monomial", offset, self.text)
        return a / b

    def pow(self, base, e, offset):
        if e < 0 and len(base) != 1:
            raise PolynomialSyntaxError("negative power of a non-monomial", offset, self.text)
        return base ** e


def _flatten_point(point, shape: VariableShape) -> list:
    seq = list(point)
    if seq and isinstance(seq[0], (list, tuple)):
        if len(seq) != shape.m or any(len(r) != shape.n for r in seq):
            raise ShapeMismatch("point grid does not match shape")
        seq = [v for row in seq for v in row]
    if len(seq) != shape.size:
        raise ShapeMismatch(f"point has {len(seq)} coordinates, expected {shape.size}")
    for v in seq:
        if v == 0:
            raise ZeroCoordinate("all coordinates must be nonzero")
    # ints would turn into floats under negative powers
    return [Fraction(v) if isinstance(v, int) else v for v in seq]


def evaluate(p: LaurentPolynomial, point):
    return p.evaluate(point)


def initial_exponent(p: LaurentPolynomial) -> ExponentVector:
    return p.initial_exponent()


def substitute_powers(p: LaurentPolynomial, powers: Sequence[int]) -> LaurentPolynomial:
    return p.substitute_powers(powers)


def parse(text: str, shape: VariableShape | None = None) -> LaurentPolynomial:
    return LaurentPolynomial.parse(text, shape)


def format_poly(p: LaurentPolynomial) -> str:
    return p.format()


def psum(polys: Iterable[LaurentPolynomial], shape: VariableShape) -> LaurentPolynomial:
    """Sum many polynomials with a single accumulator."""
    out: dict = {}
    for p in polys:
        for e, c in p._terms.items():
            out[e] = out.get(e, 0) + c
    return LaurentPolynomial(shape, out)
