"""Points with equal observables but different triplet invariants.

A :class:`RootPoint` is (z^{d_1}, ..., z^{d_n}) for a primitive k-th root of
unity z. Every quantity is computed exactly in Z[t]/(t^k - 1); equality of
complex values is then equality modulo the k-th cyclotomic polynomial.
"""

from __future__ import annotations

import cmath
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations

from .errors import InputError, NoWitnessFound, OrderMismatch
from .exactnum import CyclotomicInt

REFERENCE_N4_PAIR = ((0, 1, 4, 6), (0, 1, 4, 11))
REFERENCE_N4_ORDER = 13


@dataclass(frozen=True)
class RootPoint:
    order: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.order < 1:
            raise InputError("order must be positive")
        object.__setattr__(self, "exponents", tuple(int(d) % self.order for d in self.exponents))

    @property
    def n(self) -> int:
        return len(self.exponents)

    def generating_function(self) -> CyclotomicInt:
        return CyclotomicInt.from_exponents(self.order, self.exponents)

    def trace(self, i: int) -> CyclotomicInt:
        """tr(X^i) = G(t^i)."""
        return self.generating_function().frobenius(i)

    def differences(self) -> list[int]:
        k = self.order
        d = self.exponents
        return sorted((a - b) % k for i, a in enumerate(d) for j, b in enumerate(d) if i != j)

    def translate(self, c: int) -> "RootPoint":
        return RootPoint(self.order, tuple(d + c for d in self.exponents))


def _same_order(x: RootPoint, y: RootPoint):
    if x.order != y.order:
        raise OrderMismatch(f"orders {x.order} and {y.order} differ")


def rho_equivalent(x: RootPoint, y: RootPoint) -> bool:
    """G_x(t) G_x(1/t) = G_y(t) G_y(1/t) in Z[t]/(t^k - 1)."""
    _same_order(x, y)
    gx, gy = x.generating_function(), y.generating_function()
    return gx * gx.conjugate() == gy * gy.conjugate()


def f_value(x: RootPoint) -> CyclotomicInt:
    """tr(X)^2 tr(X^-2) + tr(X^-1)^2 tr(X^2)."""
    t1, tm1 = x.trace(1), x.trace(-1)
    return t1 * t1 * x.trace(-2) + tm1 * tm1 * x.trace(2)


def q_value(x: RootPoint, r: int) -> CyclotomicInt:
    return x.trace(r) * x.trace(-r)


def closed_form_n5() -> CyclotomicInt:
    """2 z^-6 (1-z)^2 (1-z^2)^3 (1-z^4) in Z[t]/(t^5 - 1)."""
    k = 5
    one = CyclotomicInt.from_int(k, 1)

    def lin(e):
        return one - CyclotomicInt.monomial(k, e)

    return CyclotomicInt.monomial(k, -6, 2) * lin(1) ** 2 * lin(2) ** 3 * lin(4)


def family_pair(n: int) -> tuple[RootPoint, RootPoint]:
    """x = (1, 1, z^3, z^3, z^4, ..., z^{n-1}), y = (z, z, z^2, z^2, z^4, ...)."""
    if n < 5:
        raise InputError("the family is defined for n >= 5")
    tail = tuple(range(4, n))
    return RootPoint(n, (0, 0, 3, 3) + tail), RootPoint(n, (1, 1, 2, 2) + tail)


def verify_witness(n: int) -> dict:
    if not 5 <= n <= 12:
        raise InputError("verify_witness covers 5 <= n <= 12")
    x, y = family_pair(n)
    fx, fy = f_value(x), f_value(y)
    report = {
        "n": n,
        "x_exps": list(x.exponents),
        "y_exps": list(y.exponents),
        "rho_equivalent": rho_equivalent(x, y),
        "f_sum_zero": (fx + fy).is_zero_mod_phi(),
        "f_nonzero": not fx.is_zero_mod_phi(),
        "trace_sums_zero": all((x.trace(i) + y.trace(i)).is_zero_mod_phi() for i in range(1, n)),
    }
    if n == 5:
        report["closed_form"] = fx.equal_mod_phi(closed_form_n5())
    report["passed"] = all(v for k, v in report.items() if isinstance(v, bool))
    return report


# --------------------------------------------------------------------------
# n = 4
# --------------------------------------------------------------------------

def is_witness(x: RootPoint, y: RootPoint) -> bool:
    return rho_equivalent(x, y) and not f_value(x).equal_mod_phi(f_value(y))


def recheck_float(x: RootPoint, y: RootPoint, tol: float = 1e-9) -> dict:
    """Independent check: sorted differences and complex evaluation."""
    z = cmath.exp(2j * cmath.pi / x.order)

    def tr(p, i):
        return sum(z ** (i * d) for d in p.exponents)

    def f(p):
        return tr(p, 1) ** 2 * tr(p, -2) + tr(p, -1) ** 2 * tr(p, 2)

    return {
        "differences_equal": x.differences() == y.differences(),
        "f_differs": abs(f(x) - f(y)) > tol,
        "f_x": [f(x).real, f(x).imag],
        "f_y": [f(y).real, f(y).imag],
    }


def search_n4(k_min: int = 7, k_max: int = 40, size: int = 4) -> tuple[RootPoint, RootPoint]:
    """First pair (by k, then lexicographically) of 0-containing subsets that witness."""
    for k in range(k_min, k_max + 1):
        groups = defaultdict(list)
        for rest in combinations(range(1, k), size - 1):
            p = RootPoint(k, (0,) + rest)
            groups[tuple(p.differences())].append(p)
        for members in groups.values():
            if len(members) < 2:
                continue
            fvals = [f_value(p) for p in members]
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    if not fvals[a].equal_mod_phi(fvals[b]):
                        return members[a], members[b]
    raise NoWitnessFound(f"no witness pair for k in {k_min}..{k_max}")


def verify_or_search_n4(k_min: int = 7, k_max: int = 40) -> dict:
    px, py = (RootPoint(REFERENCE_N4_ORDER, e) for e in REFERENCE_N4_PAIR)
    reference = {
        "rho_equivalent": rho_equivalent(px, py),
        "f_differs": not f_value(px).equal_mod_phi(f_value(py)),
        "x_differences": px.differences(),
        "y_differences": py.differences(),
    }
    passed = reference["rho_equivalent"] and reference["f_differs"]
    x, y = (px, py) if passed else search_n4(k_min, k_max)
    N = 12
    checks = {
        "rho_equivalent": rho_equivalent(x, y),
        "f_differs": not f_value(x).equal_mod_phi(f_value(y)),
        "q_equal_r_1_to_2N": all(q_value(x, r).equal_mod_phi(q_value(y, r)) for r in range(1, 2 * N + 1)),
        "independent": recheck_float(x, y),
        "reference_pair": reference,
    }
    return {
        "reference_pair_passed": passed,
        "certified_pair": {"k": x.order, "x_exps": list(x.exponents), "y_exps": list(y.exponents)},
        "checks": checks,
    }
