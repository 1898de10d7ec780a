"""SAGBI bases of the single-array invariant ring for n <= 4 and subduction.

Generators (all with leading coefficient 1):

* n = 2: c1
* n = 3: c1, c2
* n = 4: c1, c2, c3 and p = s_2(X) s_2(X^{-1})

Initial exponents are taken in the lexicographic order with x_1 > ... > x_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import (
    InitialExponentNotInS,
    InputError,
    NotInSemigroup,
    NotInvariant,
    UnsupportedN,
)
from .group import is_invariant
from .laurent import ExponentVector, LaurentPolynomial, VariableShape
from .observables import Expr, from_sympoly, p_generator_poly, ratio_char_coeffs
from .symfun import SymPoly, newton_e_from_p

_GENERATORS = {2: ("c1",), 3: ("c1", "c2"), 4: ("c1", "c2", "c3", "p")}


def _check_n(n: int):
    if n not in _GENERATORS:
        raise UnsupportedN(f"no finite SAGBI basis is available for n = {n}")


@dataclass(frozen=True)
class SagbiBasis:
    n: int
    names: tuple[str, ...]
    polys: tuple[LaurentPolynomial, ...]
    initials: tuple[tuple[int, ...], ...]

    def generator(self, name: str) -> LaurentPolynomial:
        return self.polys[self.names.index(name)]


@lru_cache(maxsize=None)
def sagbi_basis(n: int) -> SagbiBasis:
    _check_n(n)
    names = _GENERATORS[n]
    c = ratio_char_coeffs(n)
    polys = tuple(p_generator_poly(4) if g == "p" else c[int(g[1:]) - 1] for g in names)
    inits = tuple(p.initial_exponent().exps for p in polys)
    assert all(p.leading_coefficient() == 1 for p in polys)
    return SagbiBasis(n, names, polys, inits)


def _exps(a) -> tuple[int, ...]:
    return tuple(a.exps if isinstance(a, ExponentVector) else a)


def in_semigroup(a, n: int | None = None) -> bool:
    """Weight zero, weakly decreasing, and at least its reversed negation."""
    a = _exps(a)
    if n is not None and len(a) != n:
        raise InputError(f"exponent has {len(a)} entries, expected {n}")
    if sum(a):
        return False
    if any(a[i] < a[i + 1] for i in range(len(a) - 1)):
        return False
    return a >= tuple(-v for v in reversed(a))


def decompose_initial(a, n: int) -> dict[str, int]:
    """Nonnegative multiplicities of generator initial exponents summing to ``a``."""
    _check_n(n)
    a = _exps(a)
    if not in_semigroup(a, n):
        raise NotInSemigroup(f"{a} is not in the semigroup of initial exponents")
    if n == 2:
        mult = {"c1": a[0]}
    elif n == 3:
        mult = {"c1": a[1] - a[2], "c2": -a[1]}
    else:
        k = max(a[1], 0)  # peel off lambda_4 = (1, 1, -1, -1) first
        b = (a[0] - k, a[1] - k, a[2] + k, a[3] + k)
        mult = {"c1": b[2] - b[3], "c2": b[1] - b[2], "c3": -b[1], "p": k}
    if any(v < 0 for v in mult.values()):
        raise NotInSemigroup(f"{a} has no nonnegative decomposition")
    return {g: v for g, v in mult.items() if v}


def recombine(mult: Mapping[str, int], n: int) -> tuple[int, ...]:
    basis = sagbi_basis(n)
    out = [0] * n
    for g, k in mult.items():
        for j, v in enumerate(basis.initials[basis.names.index(g)]):
            out[j] += k * v
    return tuple(out)


@dataclass
class SubductionResult:
    expression: SymPoly
    steps: int
    trail: list = field(default_factory=list, repr=False)

    def __str__(self) -> str:
        return self.expression.format(factor_content=True)


class _MonomialCache:
    """Products of generator powers, each built from a smaller cached one."""

    def __init__(self, basis: SagbiBasis):
        self.basis = basis
        self.shape = VariableShape(1, basis.n)
        self.cache: dict = {(0,) * len(basis.names): LaurentPolynomial.constant(self.shape, 1)}

    def get(self, mult: tuple[int, ...]) -> LaurentPolynomial:
        hit = self.cache.get(mult)
        if hit is not None:
            return hit
        i = next(k for k, v in enumerate(mult) if v)
        smaller = mult[:i] + (mult[i] - 1,) + mult[i + 1:]
        value = self.get(smaller) * self.basis.polys[i]
        self.cache[mult] = value
        return value


@lru_cache(maxsize=8)
def _monomials(n: int) -> _MonomialCache:
    return _MonomialCache(sagbi_basis(n))


def subduct(f: LaurentPolynomial, n: int | None = None, check: bool = True) -> SubductionResult:
    """Write an invariant as a polynomial in the SAGBI generators."""
    if n is None:
        n = f.shape.n
    _check_n(n)
    if f.shape != VariableShape(1, n):
        raise InputError(f"subduction works on a single array of {n} variables")
    if check and not is_invariant(f):
        raise NotInvariant("input is not a degree-zero G-invariant")
    basis = sagbi_basis(n)
    monos = _monomials(n)
    result: dict = {}
    trail = []
    steps = 0
    last = None
    while f:
        alpha, c = f.leading_term()
        if last is not None and not alpha < last:
            raise InitialExponentNotInS("initial exponent failed to decrease")
        last = alpha
        try:
            mult = decompose_initial(alpha, n)
        except NotInSemigroup:
            raise InitialExponentNotInS(
                f"initial exponent {alpha} lies outside the semigroup"
            ) from None
        key = tuple(mult.get(g, 0) for g in basis.names)
        f = f - monos.get(key) * c
        result[key] = result.get(key, 0) + c
        trail.append(alpha)
        steps += 1
    expr = SymPoly.from_exponents(basis.names, result)
    return SubductionResult(expr, steps, trail)


def substitute_generators(expr: SymPoly, n: int) -> LaurentPolynomial:
    """Back-substitute generator polynomials into a generator expression."""
    basis = sagbi_basis(n)
    shape = VariableShape(1, n)
    total = LaurentPolynomial.zero(shape)
    monos = _monomials(n)
    for mono, c in expr.terms.items():
        d = dict(mono)
        extra = set(d) - set(basis.names)
        if extra:
            raise InputError(f"symbols {sorted(extra)} are not generators for n = {n}")
        key = tuple(d.get(g, 0) for g in basis.names)
        total = total + monos.get(key) * c
    return total


# --------------------------------------------------------------------------
# n = 4 relations and elimination of p
# --------------------------------------------------------------------------

@lru_cache(maxsize=1)
def n4_relations() -> dict[str, SymPoly]:
    """c2^2, c4, c5, c6 at n = 4 as polynomials in c1, c2, c3, p.

    c2^2 is itself a generator monomial, so its first subduction step uses
    the other decomposition of its initial exponent, c3*p.
    """
    c = ratio_char_coeffs(4)
    p = p_generator_poly(4)
    c3p = SymPoly.parse("c3*p")
    rel = {"c2^2": subduct(c[1] * c[1] - c[2] * p, 4, check=False).expression + c3p}
    for i in (4, 5, 6):
        rel[f"c{i}"] = subduct(c[i - 1], 4).expression
    return rel


def _split_in_p(poly: SymPoly) -> list[SymPoly]:
    return [poly.coefficient_in("p", k) for k in range(poly.degree("p") + 1)]


@lru_cache(maxsize=1)
def eliminate_p_parts() -> tuple[SymPoly, SymPoly]:
    """(numerator, denominator) with p = numerator/denominator in c1..c4."""
    rel = n4_relations()
    a1, b1, c1 = _split_in_p(rel["c2^2"])
    a2, b2, c2 = _split_in_p(rel["c4"])
    if c2 != 1:
        raise AssertionError("the c4 relation is expected to be monic in p")
    # c2^2 - a1 - b1 p = c1 (c4 - a2 - b2 p)
    num = SymPoly.parse("c2^2") - a1 - c1 * (SymPoly.var("c4") - a2)
    den = b1 - c1 * b2
    if den.constant_term() < 0:
        num, den = -num, -den
    return num, den


def eliminate_p() -> Expr:
    num, den = eliminate_p_parts()
    return Expr.div(from_sympoly(num, Expr.gen), from_sympoly(den, Expr.gen))


# --------------------------------------------------------------------------
# Conversion to observables
# --------------------------------------------------------------------------

def c_symbols_in_q(n: int, upto: int | None = None) -> dict[str, Expr]:
    """Expressions for c_i in the q_r via Newton's identities, p_r = q_r - n."""
    N = n * (n - 1)
    upto = N if upto is None else upto
    shifted = {}
    out = {}
    for i in range(1, upto + 1):
        shifted[f"p{i}"] = Expr.q((i,)) - n
        out[f"c{i}"] = from_sympoly(newton_e_from_p(i, N), lambda name: shifted[name])
    return out


def c_to_q(expr, n: int) -> Expr:
    """Rewrite an expression in c-symbols (SymPoly or Expr) in observables."""
    if isinstance(expr, SymPoly):
        names = expr.variables()
    else:
        names = [s for s in expr.symbols() if isinstance(s, str)]
    bad = [v for v in names if not (v.startswith("c") and v[1:].isdigit())]
    if bad:
        raise InputError(f"c_to_q expects only c-symbols, found {bad}")
    top = max((int(v[1:]) for v in names), default=0)
    table = c_symbols_in_q(n, top)
    if isinstance(expr, SymPoly):
        return from_sympoly(expr, lambda name: table[name])
    return expr.substitute(table)


@lru_cache(maxsize=32)
def e_symbolic(n: int, i: int) -> SymPoly:
    """e_i = E_2(X, X^i) in the generators, by subduction."""
    from .observables import e_i_poly

    if i < 0:
        i = -1 - i
    return subduct(e_i_poly(n, i), n).expression


def generator_expressions_in_q(n: int) -> dict[str, Expr]:
    """Generator symbols as observable expressions; p is eliminated at n = 4."""
    _check_n(n)
    table = c_symbols_in_q(n, 4 if n == 4 else len(_GENERATORS[n]))
    if n == 4:
        num, den = eliminate_p_parts()
        table["p"] = Expr.div(
            from_sympoly(num, lambda v: table[v]), from_sympoly(den, lambda v: table[v])
        )
    return table


def generators_to_q(expr: SymPoly, n: int, table: Mapping[str, Expr] | None = None) -> Expr:
    table = table or generator_expressions_in_q(n)
    return from_sympoly(expr, lambda v: table[v])


def subduct_with_q(f: LaurentPolynomial, n: int) -> tuple[SubductionResult, Expr]:
    res = subduct(f, n)
    return res, generators_to_q(res.expression, n)


def values_of_generators(c_values: Sequence, n: int) -> dict:
    return {f"c{i}": v for i, v in enumerate(c_values, start=1)}


def reduce_c2_squared(expr: SymPoly) -> SymPoly:
    """Normal form at n = 4: rewrite every c2^k, k >= 2, with the c2^2 relation.

    The relation is linear in c2, so the result is at most linear in c2.
    Two generator expressions for the same invariant agree after this step.
    """
    rhs = n4_relations()["c2^2"]
    out = SymPoly.const(0)
    pending = expr
    while pending:
        high = SymPoly.const(0)
        for k in range(pending.degree("c2") + 1):
            coeff = pending.coefficient_in("c2", k)
            if k < 2:
                out = out + coeff * SymPoly.var("c2") ** k
            else:
                high = high + coeff * SymPoly.var("c2") ** (k - 2) * rhs
        pending = high
    return out
