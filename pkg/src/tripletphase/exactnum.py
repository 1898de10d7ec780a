"""Exact scalars, dense rational matrices and cyclotomic integers.

Rationals are :class:`fractions.Fraction`; plain ``int`` values are accepted
anywhere a rational is expected and are kept as ints where arithmetic allows,
which is considerably faster for the integer-heavy polynomial work.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Union

from .errors import CompositeOrder, InputError, OrderMismatch, SingularMatrix

Rational = Union[int, Fraction]


def as_rational(value) -> Rational:
    """Coerce ints, Fractions and rational strings; reject floats."""
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, _RationalABC):
        return normalize(Fraction(value.numerator, value.denominator))
    if isinstance(value, str):
        return parse_rational(value)
    raise InputError(f"not a rational: {value!r}")


def normalize(value: Rational) -> Rational:
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def parse_rational(text: str) -> Rational:
    """Parse ``"p/q"`` or ``"p"`` (optionally signed)."""
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            if not den.strip():
                raise ValueError
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(int(s))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"malformed rational: {text!r}") from None
    return normalize(value)


def format_rational(value: Rational) -> str:
    value = normalize(value)
    if isinstance(value, int):
        return str(value)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple  # row-major

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise InputError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise InputError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise InputError("ragged or empty matrix")
        flat = tuple(as_rational(x) for r in rows for x in r)
        return cls(len(rows), len(rows[0]), flat)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def matvec(self, x: Sequence) -> list:
        if len(x) != self.cols:
            raise InputError("dimension mismatch in matvec")
        return [
            normalize(sum(self[i, j] * x[j] for j in range(self.cols)))
            for i in range(self.rows)
        ]

    def __str__(self) -> str:
        return "\n".join(" ".join(format_rational(v) for v in r) for r in self.to_rows())

    @classmethod
    def parse(cls, text: str) -> "RationalMatrix":
        rows = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                rows.append([parse_rational(tok) for tok in line.split()])
        return cls.from_rows(rows)


def solve_linear(A: RationalMatrix, b: Sequence) -> list:
    """Solve ``A x = b`` exactly by Gaussian elimination.

    Pivots are the first nonzero entry in each column. Raises
    :class:`SingularMatrix` when ``A`` has a zero determinant.
    """
    n = A.rows
    if A.cols != n:
        raise InputError("solve_linear needs a square matrix")
    if len(b) != n:
        raise InputError("right-hand side length does not match matrix")
    m = [[Fraction(v) for v in A.row(i)] + [Fraction(as_rational(b[i]))] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix(f"matrix is singular (no pivot in column {col})")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
        prow = m[col]
        inv = 1 / prow[col]
        for r in range(col + 1, n):
            factor = m[r][col]
            if factor:
                factor *= inv
                row = m[r]
                for c in range(col, n + 1):
                    row[c] -= factor * prow[c]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = m[i][n] - sum(m[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / m[i][i]
    return [normalize(v) for v in x]


def solve_linear_float(A: Sequence[Sequence[float]], b: Sequence[float], rtol: float = 1e-12) -> list[float]:
    """Floating-point solve with partial pivoting.

    A pivot below ``rtol`` times the largest entry counts as singular.
    """
    n = len(A)
    m = [[float(v) for v in A[i]] + [float(b[i])] for i in range(n)]
    scale = max((abs(v) for row in A for v in row), default=0.0)
    if scale == 0.0:
        raise SingularMatrix("zero matrix")
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(m[r][col]))
        if abs(m[piv][col]) <= rtol * scale:
            raise SingularMatrix(f"matrix is numerically singular (column {col})")
        m[col], m[piv] = m[piv], m[col]
        prow = m[col]
        for r in range(col + 1, n):
            factor = m[r][col] / prow[col]
            if factor:
                row = m[r]
                for c in range(col, n + 1):
                    row[c] -= factor * prow[c]
    x = [0.0] * n
    for i in range(n - 1, -1, -1):
        s = m[i][n] - sum(m[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / m[i][i]
    return x


# --------------------------------------------------------------------------
# Cyclotomic integers: Z[t]/(t^k - 1)
# --------------------------------------------------------------------------

def _is_prime(k: int) -> bool:
    if k < 2:
        return False
    d = 2
    while d * d <= k:
        if k % d == 0:
            return False
        d += 1
    return True


def _poly_divmod_monic(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Integer polynomial long division by a monic divisor (low-order first)."""
    num = list(num)
    dd = len(den) - 1
    if len(num) <= dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    rem = num[:dd] or [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(k: int) -> tuple[int, ...]:
    """Coefficients (low-order first) of the k-th cyclotomic polynomial.

    Uses ``t^k - 1 = prod_{d | k} Phi_d(t)``.
    """
    if k < 1:
        raise InputError("cyclotomic order must be positive")
    poly = [-1] + [0] * (k - 1) + [1]
    for d in range(1, k):
        if k % d == 0:
            poly, rem = _poly_divmod_monic(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


@dataclass(frozen=True)
class CyclotomicInt:
    """Element of Z[t]/(t^k - 1); ``coeffs[i]`` is the coefficient of t^i."""

    order: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.order < 1:
            raise InputError("order must be positive")
        if len(self.coeffs) != self.order:
            raise InputError("coefficient vector length must equal the order")

    @classmethod
    def zero(cls, k: int) -> "CyclotomicInt":
        return cls(k, (0,) * k)

    @classmethod
    def from_int(cls, k: int, c: int) -> "CyclotomicInt":
        return cls(k, (c,) + (0,) * (k - 1))

    @classmethod
    def monomial(cls, k: int, e: int, c: int = 1) -> "CyclotomicInt":
        v = [0] * k
        v[e % k] = c
        return cls(k, tuple(v))

    @classmethod
    def from_exponents(cls, k: int, exps: Iterable[int]) -> "CyclotomicInt":
        """Sum of t^e over a multiset of exponents (a generating function)."""
        v = [0] * k
        for e in exps:
            v[e % k] += 1
        return cls(k, tuple(v))

    def _check(self, other: "CyclotomicInt"):
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        if other.order != self.order:
            raise OrderMismatch(f"orders {self.order} and {other.order} differ")
        return None

    def _lift(self, other):
        if isinstance(other, int):
            return CyclotomicInt.from_int(self.order, other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CyclotomicInt(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInt(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._lift(other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return cyc_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise InputError("negative powers are only defined for monomials; use inverse_power")
        result = CyclotomicInt.from_int(self.order, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self, j: int) -> "CyclotomicInt":
        """Substitute t -> t^j (j may be negative)."""
        v = [0] * self.order
        for i, c in enumerate(self.coeffs):
            if c:
                v[(i * j) % self.order] += c
        return CyclotomicInt(self.order, tuple(v))

    def conjugate(self) -> "CyclotomicInt":
        return self.frobenius(-1)

    def reduce_primitive(self) -> tuple[int, ...]:
        """Canonical representative modulo Phi_k, degree < phi(k)."""
        phi = list(cyclotomic_polynomial(self.order))
        _, rem = _poly_divmod_monic(list(self.coeffs), phi)
        rem = list(rem) + [0] * (len(phi) - 1 - len(rem))
        return tuple(rem)

    def is_zero_mod_phi(self) -> bool:
        """Zero test in Z[zeta_k] for any order k."""
        return not any(self.reduce_primitive())

    def equal_mod_phi(self, other: "CyclotomicInt") -> bool:
        return (self - other).is_zero_mod_phi()

    def evaluate_complex(self, root: complex) -> complex:
        return sum(c * root ** i for i, c in enumerate(self.coeffs))

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if i == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") or "0"


def cyc_mul(a: CyclotomicInt, b: CyclotomicInt) -> CyclotomicInt:
    """Cyclic convolution of coefficient vectors."""
    if a.order != b.order:
        raise OrderMismatch(f"orders {a.order} and {b.order} differ")
    k = a.order
    out = [0] * k
    bnz = [(j, c) for j, c in enumerate(b.coeffs) if c]
    for i, ca in enumerate(a.coeffs):
        if ca:
            for j, cb in bnz:
                out[(i + j) % k] += ca * cb
    return CyclotomicInt(k, tuple(out))


def cyc_is_zero_primitive(a: CyclotomicInt) -> bool:
    """True iff ``a`` vanishes at a primitive k-th root of unity, k prime.

    For prime k, Phi_k = 1 + t + ... + t^(k-1), so ``a`` is zero exactly when
    its coefficient vector is constant.
    """
    if not _is_prime(a.order):
        raise CompositeOrder(f"order {a.order} is not prime")
    first = a.coeffs[0]
    return all(c == first for c in a.coeffs)
