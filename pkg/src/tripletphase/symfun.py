"""Polynomials in named symbols, Newton's identities and symmetric rewriting.

:class:`SymPoly` is the carrier for everything written in abstract symbols:
elementary symmetric functions ``s1..sN``, power sums ``p1..pN``, the
generators ``c1..cN, p`` and the ratio variables ``z1_2`` of the lift.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

from ._parsing import parse_with
from .errors import IndexOutOfRange, InputError, NotSymmetric, PolynomialSyntaxError
from .exactnum import as_rational, format_rational, normalize
from .laurent import LaurentPolynomial, VariableShape

_NAME_OK = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@lru_cache(maxsize=4096)
def name_key(name: str) -> tuple:
    """Natural sort key: ``c2 < c10``, ``z1_2 < z1_3``."""
    m = re.match(r"([A-Za-z]*)", name)
    return (m.group(1), tuple(int(d) for d in re.findall(r"\d+", name)), name)


def _merge(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, k in b:
        d[v] = d.get(v, 0) + k
    return tuple(sorted(d.items(), key=lambda t: name_key(t[0])))


class SymPoly:
    """Immutable sparse polynomial over Q in named symbols.

    A monomial is a tuple of ``(name, exponent)`` pairs sorted by
    :func:`name_key`, with positive exponents.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            if c:
                clean[tuple(mono)] = normalize(as_rational(c))
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "SymPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> "SymPoly":
        c = as_rational(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, name: str) -> "SymPoly":
        if not _NAME_OK.match(name):
            raise InputError(f"bad symbol name {name!r}")
        return cls._raw({((name, 1),): 1})

    @classmethod
    def from_exponents(cls, names: Sequence[str], terms: Mapping[tuple, object]) -> "SymPoly":
        out = {}
        for e, c in terms.items():
            mono = tuple(sorted(((v, k) for v, k in zip(names, e) if k), key=lambda t: name_key(t[0])))
            out[mono] = out.get(mono, 0) + c
        return cls(out)

    # -- protocol ----------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {()}

    def constant_term(self):
        return self._terms.get((), 0)

    def variables(self) -> list[str]:
        names = {v for mono in self._terms for v, _ in mono}
        return sorted(names, key=name_key)

    def degree(self, name: str | None = None) -> int:
        if not self._terms:
            return -1
        if name is None:
            return max(sum(k for _, k in mono) for mono in self._terms)
        return max(dict(mono).get(name, 0) for mono in self._terms)

    def coefficient_in(self, name: str, k: int) -> "SymPoly":
        """Coefficient of ``name**k`` viewing self as a polynomial in ``name``."""
        out = {}
        for mono, c in self._terms.items():
            d = dict(mono)
            if d.get(name, 0) == k:
                d.pop(name, None)
                out[tuple(sorted(d.items(), key=lambda t: name_key(t[0])))] = c
        return SymPoly._raw(out)

    def __eq__(self, other):
        if isinstance(other, SymPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"SymPoly({self.format()!r})"

    def __str__(self):
        return self.format()

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, SymPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return SymPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            v = out.get(mono, 0) + c
            if v:
                out[mono] = normalize(v)
            else:
                out.pop(mono, None)
        return SymPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return SymPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                mono = _merge(ma, mb)
                out[mono] = out.get(mono, 0) + ca * cb
        return SymPoly._raw({m: normalize(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SymPoly) and other.is_constant():
            other = other.constant_term()
        if not isinstance(other, (int, Fraction)):
            raise InputError("SymPoly division is only by nonzero constants")
        if not other:
            raise ZeroDivisionError("division by zero")
        inv = Fraction(1) / other
        return SymPoly._raw({m: normalize(c * inv) for m, c in self._terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise InputError("negative powers are not polynomials")
        result = SymPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- substitution ------------------------------------------------------
    def rename(self, mapping: Mapping[str, str]) -> "SymPoly":
        out: dict = {}
        for mono, c in self._terms.items():
            d: dict = {}
            for v, k in mono:
                w = mapping.get(v, v)
                d[w] = d.get(w, 0) + k
            key = tuple(sorted(d.items(), key=lambda t: name_key(t[0])))
            out[key] = out.get(key, 0) + c
        return SymPoly(out)

    def substitute(self, mapping: Mapping[str, object]) -> "SymPoly":
        """Replace symbols by SymPolys (or constants); others are kept."""
        cache: dict = {}

        def power(name, k):
            key = (name, k)
            if key not in cache:
                base = mapping[name]
                base = base if isinstance(base, SymPoly) else SymPoly.const(base)
                cache[key] = base if k == 1 else power(name, k - 1) * base
            return cache[key]

        total: dict = {}
        for mono, c in self._terms.items():
            term = SymPoly.const(c)
            keep = []
            for v, k in mono:
                if v in mapping:
                    term = term * power(v, k)
                else:
                    keep.append((v, k))
            if keep:
                term = term * SymPoly._raw({tuple(keep): 1})
            for m2, c2 in term._terms.items():
                total[m2] = total.get(m2, 0) + c2
        return SymPoly(total)

    def evaluate(self, env: Mapping[str, object]):
        """Value under a total assignment of symbols (any numeric type)."""
        total = 0
        for mono, c in self._terms.items():
            term = c
            for v, k in mono:
                if v not in env:
                    raise InputError(f"no value for symbol {v!r}")
                term = term * env[v] ** k
            total = total + term
        return normalize(total) if isinstance(total, (int, Fraction)) else total

    def map_coefficients(self, fn: Callable) -> "SymPoly":
        return SymPoly({m: fn(c) for m, c in self._terms.items()})

    def content(self) -> Fraction:
        """Positive rational content (gcd of numerators over lcm of denominators)."""
        if not self._terms:
            return Fraction(0)
        nums = [Fraction(c).numerator for c in self._terms.values()]
        dens = [Fraction(c).denominator for c in self._terms.values()]
        g = 0
        for x in nums:
            g = math.gcd(g, x)
        lcm = 1
        for d in dens:
            lcm = lcm * d // math.gcd(lcm, d)
        return Fraction(g, lcm)

    # -- ordering and text ---------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple, object]]:
        """Terms in lex order with variables ordered by :func:`name_key`."""
        names = self.variables()

        def key(item):
            d = dict(item[0])
            return tuple(d.get(v, 0) for v in names)

        return sorted(self._terms.items(), key=key, reverse=True)

    def format(self, factor_content: bool = False) -> str:
        if not self._terms:
            return "0"
        if factor_content and len(self._terms) > 1:
            g = self.content()
            if g != 1:
                inner = (self / g).format()
                return f"{format_rational(g)}*({inner})"
        pieces = []
        for mono, c in self.sorted_terms():
            body = "*".join(v if k == 1 else f"{v}^{k}" for v, k in mono)
            mag = abs(c)
            if not body:
                body = format_rational(mag)
            elif mag != 1:
                body = f"{format_rational(mag)}*{body}"
            pieces.append(("-" if c < 0 else "+", body))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    @classmethod
    def parse(cls, text: str) -> "SymPoly":
        return parse_with(text, _SymBuilder(text))


class _SymBuilder:
    def __init__(self, text):
        self.text = text

    def const(self, c):
        return SymPoly.const(c)

    def var(self, name, offset):
        return SymPoly.var(name)

    def div(self, a, b, offset):
        if not b.is_constant() or b.is_zero():
            raise PolynomialSyntaxError("division by a non-constant", offset, self.text)
        return a / b

    def pow(self, base, e, offset):
        if e < 0:
            raise PolynomialSyntaxError("negative exponent", offset, self.text)
        return base ** e


def sym(name: str) -> SymPoly:
    return SymPoly.var(name)


def symbols(prefix: str, count: int, start: int = 1) -> list[SymPoly]:
    return [SymPoly.var(f"{prefix}{i}") for i in range(start, start + count)]


# --------------------------------------------------------------------------
# Newton's identities
# --------------------------------------------------------------------------

def _check_range(r: int, N: int):
    if not (1 <= r <= N):
        raise IndexOutOfRange(f"index {r} outside 1..{N}")


@lru_cache(maxsize=None)
def _p_from_e(r: int) -> SymPoly:
    # p_r = sum_{i=1}^{r-1} (-1)^(i-1) e_i p_{r-i} + (-1)^(r-1) r e_r
    total = SymPoly.var(f"e{r}") * ((-1) ** (r - 1) * r)
    for i in range(1, r):
        total = total + SymPoly.var(f"e{i}") * _p_from_e(r - i) * ((-1) ** (i - 1))
    return total


@lru_cache(maxsize=None)
def _e_from_p(r: int) -> SymPoly:
    # r e_r = sum_{i=1}^{r} (-1)^(i-1) e_{r-i} p_i,  e_0 = 1
    total = SymPoly.const(0)
    for i in range(1, r + 1):
        prev = SymPoly.const(1) if i == r else _e_from_p(r - i)
        total = total + prev * SymPoly.var(f"p{i}") * ((-1) ** (i - 1))
    return total / r


def newton_p_from_e(r: int, N: int) -> SymPoly:
    """Power sum p_r of N quantities in terms of elementary e_1..e_r."""
    _check_range(r, N)
    return _p_from_e(r)


def newton_e_from_p(r: int, N: int) -> SymPoly:
    """Elementary symmetric e_r of N quantities in terms of power sums p_1..p_r."""
    _check_range(r, N)
    return _e_from_p(r)


# --------------------------------------------------------------------------
# Symmetric polynomials in elementary symmetric functions
# --------------------------------------------------------------------------

def elementary_polynomial(k: int, variables: Sequence[str]) -> SymPoly:
    """e_k of the given symbols (e_0 = 1)."""
    if k == 0:
        return SymPoly.const(1)
    terms = {}
    for combo in combinations(sorted(variables, key=name_key), k):
        terms[tuple((v, 1) for v in combo)] = 1
    return SymPoly(terms)


def _to_dense(f: SymPoly, variables: Sequence[str]) -> LaurentPolynomial:
    pos = {v: i for i, v in enumerate(variables)}
    shape = VariableShape(1, max(2, len(variables)))
    terms = {}
    for mono, c in f.terms.items():
        e = [0] * shape.n
        for v, k in mono:
            if v not in pos:
                raise InputError(f"symbol {v!r} is not among the listed variables")
            e[pos[v]] = k
        terms[tuple(e)] = c
    return LaurentPolynomial(shape, terms)


def is_symmetric(f: SymPoly, variables: Sequence[str]) -> bool:
    """Check invariance under the adjacent transpositions (they generate S_N)."""
    for a, b in zip(variables, variables[1:]):
        if f.rename({a: b, b: a}) != f:
            return False
    return True


def decompose_in_elementary(f: SymPoly, variables: Sequence[str], prefix: str = "s") -> SymPoly:
    """Rewrite a symmetric polynomial in ``s1..sN`` by leading-term subtraction.

    ``variables`` fixes the lex order (first is largest).
    """
    variables = list(variables)
    N = len(variables)
    if not is_symmetric(f, variables):
        raise NotSymmetric("input is not symmetric in the listed variables")
    dense = _to_dense(f, variables)
    shape = dense.shape
    elem = [LaurentPolynomial.constant(shape, 1)] + [
        _to_dense(elementary_polynomial(k, variables), variables) for k in range(1, N + 1)
    ]
    powers: dict = {}

    def elem_power(k, d):
        key = (k, d)
        if key not in powers:
            powers[key] = elem[k] if d == 1 else elem_power(k, d - 1) * elem[k]
        return powers[key]

    result: dict = {}
    while dense:
        lead, c = dense.leading_term()
        a = list(lead[:N]) + [0]
        if any(a[i] < a[i + 1] for i in range(N)) or any(x < 0 for x in a):
            raise NotSymmetric("leading exponent is not a partition")
        mults = [a[i] - a[i + 1] for i in range(N)]
        prod = LaurentPolynomial.constant(shape, c)
        for k, d in enumerate(mults, start=1):
            if d:
                prod = prod * elem_power(k, d)
        dense = dense - prod
        mono = tuple((f"{prefix}{k}", d) for k, d in enumerate(mults, start=1) if d)
        result[mono] = result.get(mono, 0) + c
    return SymPoly(result)


def palindromic_normalize(P: SymPoly, N: int, prefix: str = "s") -> SymPoly:
    """Replace s_i by s_{N-i} for i > N/2, with s_0 = 1."""
    mapping: dict = {}
    for i in range(1, N + 1):
        if 2 * i > N:
            j = N - i
            mapping[f"{prefix}{i}"] = SymPoly.const(1) if j == 0 else SymPoly.var(f"{prefix}{j}")
    return P.substitute(mapping)


def monomial_symmetric(exponents: Sequence[int], variables: Sequence[str]) -> SymPoly:
    """Sum over the S_N-orbit of one monomial."""
    from itertools import permutations

    seen = {}
    for perm in set(permutations(exponents)):
        mono = tuple(sorted(((v, k) for v, k in zip(variables, perm) if k), key=lambda t: name_key(t[0])))
        seen[mono] = 1
    return SymPoly(seen)


def symmetric_sum(polys: Iterable[SymPoly]) -> SymPoly:
    total: dict = {}
    for p in polys:
        for m, c in p.terms.items():
            total[m] = total.get(m, 0) + c
    return SymPoly(total)
