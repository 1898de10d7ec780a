"""Universal denominators in ratio variables and the symmetrisation algorithm.

Ratio variables z_{ij} (i != j) stand for x_i/x_j; for several arrays they
are z_{hij} and there is one more variable t standing for q_{1..1} - n.
The map phi sends a polynomial in these symbols to the Laurent polynomial
it stands for. Symbols are named ``z<i>_<j>`` for one array and
``z<h>_<i>_<j>`` otherwise.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial
from typing import Iterable, Sequence

from .errors import BudgetExceeded, InputError, NotDegreeZero, NotInvariant, RequiresNAtLeast3
from .group import adjacent, embedded_group, group_elements, is_invariant, lambda_permutation, lambda_set, opposite
from .laurent import LaurentPolynomial, VariableShape
from .observables import Expr, from_sympoly, q_poly
from .sagbi import c_symbols_in_q
from .symfun import SymPoly, decompose_in_elementary, palindromic_normalize

DEFAULT_BUDGET = 200_000


def z_name(i: int, j: int, h: int | None = None) -> str:
    return f"z{i}_{j}" if h is None else f"z{h}_{i}_{j}"


def z_names(n: int, h: int | None = None) -> list[str]:
    """Names of the ratio symbols in the order of ``lambda_set(n)``."""
    return [z_name(a.i, a.j, h) for a in lambda_set(n)]


@lru_cache(maxsize=64)
def _phi_table(n: int, m: int, multi: bool) -> dict:
    shape = VariableShape(m, n)
    table = {}
    for h in range(1, m + 1):
        for lam in lambda_set(n):
            e = [0] * shape.size
            e[shape.index(h, lam.i)] = 1
            e[shape.index(h, lam.j)] = -1
            table[z_name(lam.i, lam.j, h if multi else None)] = LaurentPolynomial._raw(shape, {tuple(e): 1})
    if multi:
        table["t"] = q_poly((1,) * m, n) - n
    return table


def phi(F: SymPoly, n: int, m: int = 1) -> LaurentPolynomial:
    """Image of a ratio-symbol polynomial in k[X^{+-1}]_0."""
    multi = m > 1 or any(v.count("_") == 2 or v == "t" for v in F.variables())
    table = _phi_table(n, m, multi)
    shape = VariableShape(m, n)
    total: dict = {}
    for mono, c in F.terms.items():
        term = LaurentPolynomial.constant(shape, c)
        for v, k in mono:
            if v not in table:
                raise InputError(f"symbol {v!r} has no image for n = {n}, m = {m}")
            term = term * table[v] ** k
        for e, cc in term._terms.items():
            total[e] = total.get(e, 0) + cc
    return LaurentPolynomial(shape, total)


@dataclass
class FactoredPolynomial:
    """Product of unexpanded factors (SymPolys in ratio symbols)."""

    factors: list[SymPoly] = field(default_factory=list)
    n: int = 3
    m: int = 1

    def __len__(self) -> int:
        return len(self.factors)

    def expand(self) -> SymPoly:
        out = SymPoly.const(1)
        for f in self.factors:
            out = out * f
        return out

    def rename(self, mapping) -> "FactoredPolynomial":
        return FactoredPolynomial([f.rename(mapping) for f in self.factors], self.n, self.m)

    def phi_factors(self) -> list[LaurentPolynomial]:
        return [phi(f, self.n, self.m) for f in self.factors]

    def phi_is_zero(self) -> bool:
        """Decided factor-wise: a product vanishes iff some factor does."""
        return any(g.is_zero() for g in self.phi_factors())

    def phi_expand(self) -> LaurentPolynomial:
        out = LaurentPolynomial.constant(VariableShape(self.m, self.n), 1)
        for g in self.phi_factors():
            out = out * g
        return out

    def __mul__(self, other: "FactoredPolynomial") -> "FactoredPolynomial":
        return FactoredPolynomial(self.factors + other.factors, self.n, self.m)


def _binomial(a: str, b: str, c: str | None) -> SymPoly:
    prod = SymPoly.var(a) * SymPoly.var(b)
    return prod - (SymPoly.var(c) if c else 1)


def _build_D(n: int, h: int | None = None) -> FactoredPolynomial:
    lam = lambda_set(n)
    names = z_names(n, h)
    d1, d2 = [], []
    for a, b in combinations(range(len(lam)), 2):
        if opposite(lam[a], lam[b]):
            continue
        d1.append(_binomial(names[a], names[b], None))
        if not adjacent(lam[a], lam[b]):
            d2.extend(_binomial(names[a], names[b], names[e]) for e in range(len(lam)))
    return FactoredPolynomial(d1 + d2, n, 1 if h is None else h)


def build_D(n: int) -> FactoredPolynomial:
    """D = D1 * D2 for one array (n >= 3)."""
    if n < 3:
        raise RequiresNAtLeast3("the universal denominator is defined for n >= 3")
    return _build_D(n)


def build_D_parts(n: int) -> tuple[FactoredPolynomial, FactoredPolynomial]:
    if n < 3:
        raise RequiresNAtLeast3("the universal denominator is defined for n >= 3")
    D = _build_D(n)
    lam = lambda_set(n)
    k1 = sum(1 for a, b in combinations(range(len(lam)), 2) if not opposite(lam[a], lam[b]))
    return FactoredPolynomial(D.factors[:k1], n), FactoredPolynomial(D.factors[k1:], n)


def permutation_mapping(h: Sequence[int], n: int, arr: int | None = None) -> dict:
    names = z_names(n, arr)
    return {names[a]: names[h[a]] for a in range(len(names))}


def _phi_signature(polys: Iterable[LaurentPolynomial]):
    """Multiset of factor images up to sign, plus the parity of sign flips."""
    parity = 0
    bag = Counter()
    for g in polys:
        neg = -g
        if hash(neg) < hash(g) or (hash(neg) == hash(g) and neg.format() < g.format()):
            g = neg
            parity ^= 1
        bag[g] += 1
    return bag, parity


def _classify(images: list[LaurentPolynomial], reference, ref_expanded_fn) -> str:
    if any(g.is_zero() for g in images):
        return "annihilated"
    bag, parity = _phi_signature(images)
    if bag == reference[0] and parity == reference[1]:
        return "preserved"
    # fall back to full expansion
    shape = images[0].shape
    prod = LaurentPolynomial.constant(shape, 1)
    for g in images:
        prod = prod * g
    return "preserved" if prod == ref_expanded_fn() else "other"


@dataclass
class SweepReport:
    checked: int = 0
    preserved: int = 0
    annihilated: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "preserved": self.preserved,
            "annihilated": self.annihilated,
            "violations": self.violations,
        }


def _d_images(n: int, h: Sequence[int] | None, D: FactoredPolynomial) -> list[LaurentPolynomial]:
    if h is None:
        return D.phi_factors()
    return D.rename(permutation_mapping(h, n)).phi_factors()


def classify_D(n: int, h: Sequence[int], D: FactoredPolynomial | None = None) -> str:
    D = D or build_D(n)
    ref = _phi_signature(D.phi_factors())
    return _classify(_d_images(n, h, D), ref, D.phi_expand)


def verify_lemma_D(n: int = 3) -> SweepReport:
    """phi(hD) = phi(D) exactly for h in G, and phi(hD) = 0 otherwise."""
    D = build_D(n)
    ref = _phi_signature(D.phi_factors())
    expanded = lru_cache(maxsize=1)(D.phi_expand)
    G = embedded_group(n)
    report = SweepReport()
    for h in permutations(range(n * (n - 1))):
        status = _classify(_d_images(n, h, D), ref, expanded)
        report.checked += 1
        expected = "preserved" if h in G else "annihilated"
        if status == "preserved":
            report.preserved += 1
        elif status == "annihilated":
            report.annihilated += 1
        if status != expected:
            report.violations.append({"h": list(h), "status": status, "expected": expected})
    return report


# --------------------------------------------------------------------------
# Several arrays
# --------------------------------------------------------------------------

def build_E1(n: int, m: int) -> FactoredPolynomial:
    """prod over (g_2..g_m) in G^{m-1}, not all 1, of (t - sum z_1 z_{2,g2} ...)."""
    lam = lambda_set(n)
    perms = []
    seen = set()
    for g in group_elements(n):
        p = lambda_permutation(g)
        if p not in seen:
            seen.add(p)
            perms.append(p)
    identity = tuple(range(len(lam)))
    names = [z_names(n, h) for h in range(1, m + 1)]
    factors = []
    from itertools import product as _product

    for gs in _product(perms, repeat=m - 1):
        if all(g == identity for g in gs):
            continue
        total = SymPoly.const(0)
        for a in range(len(lam)):
            term = SymPoly.var(names[0][a])
            for h, g in enumerate(gs, start=1):
                term = term * SymPoly.var(names[h][g[a]])
            total = total + term
        factors.append(SymPoly.var("t") - total)
    return FactoredPolynomial(factors, n, m)


def build_E(n: int, m: int) -> FactoredPolynomial:
    """E = D(z_1) ... D(z_m) E_1 for m arrays."""
    if n < 3:
        raise RequiresNAtLeast3("the universal denominator is defined for n >= 3")
    factors = []
    for h in range(1, m + 1):
        factors.extend(_build_D(n, h).factors)
    E = FactoredPolynomial(factors, n, m)
    return E * build_E1(n, m)


def _apply_tuple(F: FactoredPolynomial, hs: Sequence[Sequence[int]], n: int) -> FactoredPolynomial:
    mapping = {}
    for arr, h in enumerate(hs, start=1):
        mapping.update(permutation_mapping(h, n, arr))
    return F.rename(mapping)


def verify_E_property(n: int = 3, m: int = 2) -> SweepReport:
    """Sweep all (s_1, s_2) in Sym(Lambda)^2; preserved iff s_1 = s_2 in G.

    The D-part vanishes iff some phi(s_h D) vanishes, which is decided once per
    permutation; E_1 factors are only examined when both D-parts survive.
    """
    if m != 2:
        raise InputError("the exhaustive sweep is implemented for m = 2")
    D = build_D(n)
    E1 = build_E1(n, m)
    ref_e1 = _phi_signature(E1.phi_factors())
    d_ref = _phi_signature(D.phi_factors())
    d_status = {}
    perms = list(permutations(range(n * (n - 1))))
    for h in perms:
        d_status[h] = _classify(_d_images(n, h, D), d_ref, D.phi_expand)
    G = embedded_group(n)
    report = SweepReport()
    alive = [h for h in perms if d_status[h] != "annihilated"]
    total = len(perms) ** 2
    # pairs with an annihilated D-part
    dead = total - len(alive) ** 2
    report.checked = total
    report.annihilated = dead
    for h in perms:
        if d_status[h] == "other":
            report.violations.append({"h": list(h), "status": "D image neither preserved nor zero"})
    for h1 in alive:
        for h2 in alive:
            images = _apply_tuple(E1, (h1, h2), n).phi_factors()
            status = _classify(images, ref_e1, E1.phi_expand)
            expected = "preserved" if (h1 == h2 and h1 in G) else "annihilated"
            if status == "preserved":
                report.preserved += 1
            elif status == "annihilated":
                report.annihilated += 1
            if status != expected:
                report.violations.append(
                    {"h1": list(h1), "h2": list(h2), "status": status, "expected": expected}
                )
    return report


# --------------------------------------------------------------------------
# Lift and the symmetrisation algorithm
# --------------------------------------------------------------------------

def lift(f: LaurentPolynomial, m: int | None = None) -> SymPoly:
    """A polynomial F in ratio symbols with phi(F) = f (greedy pairing)."""
    m = f.shape.m if m is None else m
    if m != f.shape.m:
        raise InputError(f"polynomial has {f.shape.m} arrays, expected {m}")
    if not f.is_degree_zero():
        raise NotDegreeZero("lift needs a polynomial of degree zero in every array")
    n = f.shape.n
    multi = m > 1
    terms: dict = {}
    for e, c in f.terms.items():
        factors: dict = {}
        for h in range(m):
            a = list(e[h * n:(h + 1) * n])
            while any(a):
                i = max(range(n), key=lambda k: (a[k], -k))
                j = min(range(n), key=lambda k: (a[k], k))
                k = min(a[i], -a[j])
                name = z_name(i + 1, j + 1, h + 1 if multi else None)
                factors[name] = factors.get(name, 0) + k
                a[i] -= k
                a[j] += k
        mono = SymPoly.const(1)
        for name, k in factors.items():
            mono = mono * SymPoly.var(name) ** k
        for mm, cc in mono.terms.items():
            terms[mm] = terms.get(mm, 0) + c * cc
    return SymPoly(terms)


def _estimate_cost(n: int, D: FactoredPolynomial, F: SymPoly) -> int:
    size = 1
    for f in D.factors:
        size *= max(1, len(f))
        if size > 10**12:
            break
    return factorial(n * (n - 1)) * size * max(1, len(F))


def _symmetrize(P: SymPoly, n: int) -> SymPoly:
    names = z_names(n)
    total: dict = {}
    for h in permutations(range(len(names))):
        image = P.rename({names[a]: names[h[a]] for a in range(len(names))})
        for mono, c in image.terms.items():
            total[mono] = total.get(mono, 0) + c
    return SymPoly(total)


def _to_observables(S: SymPoly, n: int) -> Expr:
    N = n * (n - 1)
    elem = decompose_in_elementary(S, z_names(n))
    pal = palindromic_normalize(elem, N)
    top = max((int(v[1:]) for v in pal.variables()), default=0)
    cq = c_symbols_in_q(n, max(top, 1))
    return from_sympoly(pal, lambda v: cq["c" + v[1:]])


def algorithm31(f: LaurentPolynomial, n: int | None = None, budget: int = DEFAULT_BUDGET) -> Expr:
    """Express an invariant as a quotient of polynomials in the observables q_r.

    Returns phi(sum_h h(D F)) / phi(sum_h h(D)) over h in Sym(Lambda), with
    both sums rewritten in the q_r.
    """
    n = f.shape.n if n is None else n
    if f.shape != VariableShape(1, n):
        raise InputError("algorithm31 works on a single array")
    if not is_invariant(f):
        raise NotInvariant("input is not a degree-zero G-invariant")
    D = _build_D(n)
    F = lift(f)
    cost = _estimate_cost(n, D, F)
    if cost > budget:
        raise BudgetExceeded(
            f"estimated {cost:.3g} term operations exceed the budget of {budget}"
        )
    Dx = D.expand()
    num = _to_observables(_symmetrize(Dx * F, n), n)
    den = _to_observables(_symmetrize(Dx, n), n)
    return Expr.div(num, den)
