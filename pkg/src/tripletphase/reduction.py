"""Two-array reduction: E_2(X, Y) from single-array invariants and observables.

With the basis rho(X^i), i = -N/2 .. N/2-1, of the ratio space, the
coordinates lambda of rho(Y) solve ``R lambda = rhs`` where

    R[j][i] = q_{|i+j|} - n      (q_0 = n^2)
    rhs[j]  = q_{j,1} - n

and E_2 splits as a multilinear part plus the index-coincidence part:

    E_2(X, Y) = sum_i lambda_i e_i + (1 - sum_i lambda_i) * 2 q_1

with e_i = E_2(X, X^i), e_{-1-i} = e_i and e_0 = 2 n q_1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import InputError, MissingObservable, SingularMatrix, SingularR, ZeroMagnitude
from .exactnum import RationalMatrix, normalize, solve_linear, solve_linear_float
from .observables import Expr, ObservableIndex
from .sagbi import e_symbolic, generators_to_q

SCHEMA = "tripletphase.formula/1"
SUPPORTED_N = (2, 3, 4)


def _check_n(n: int):
    if n not in SUPPORTED_N:
        raise InputError(f"the reduction is implemented for n in {SUPPORTED_N}, got {n}")


def offsets(n: int) -> range:
    N = n * (n - 1)
    return range(-N // 2, N // 2)


def required_observables(n: int) -> list[ObservableIndex]:
    """q_{r,0} for r = 1..N and q_{s,1} for the basis offsets s."""
    N = n * (n - 1)
    out = {ObservableIndex((r, 0)) for r in range(1, N + 1)}
    out |= {ObservableIndex((s, 1)) for s in offsets(n)}
    return sorted(out)


def _lookup(q_values: Mapping) -> dict:
    table = {}
    for k, v in q_values.items():
        idx = ObservableIndex.of(k)
        if idx.m == 1:
            idx = ObservableIndex((idx.r[0], 0))
        table[idx] = v
    return table


def _require(n: int, table: Mapping, extra: Sequence[ObservableIndex] = ()):
    missing = [idx for idx in list(required_observables(n)) + list(extra) if idx not in table]
    if missing:
        raise MissingObservable(sorted(set(missing)))


def _q(table, n, r):
    return n * n if r == 0 else table[ObservableIndex((r, 0))]


def r_matrix(n: int, q_values: Mapping) -> RationalMatrix:
    table = _lookup(q_values)
    _require(n, table)
    off = offsets(n)
    return RationalMatrix.from_rows(
        [[_q(table, n, abs(i + j)) - n for i in off] for j in off]
    )


def rhs_vector(n: int, q_values: Mapping) -> list:
    table = _lookup(q_values)
    return [normalize(table[ObservableIndex((s, 1))] - n) for s in offsets(n)]


def _is_float_data(q_values: Mapping) -> bool:
    return any(isinstance(v, float) for v in q_values.values())


def solve_lambdas(n: int, q_values: Mapping) -> list:
    """Coordinates of rho(Y) in the shifted power basis of rho(X).

    Exact for rational data; float data is solved in double precision.
    """
    _check_n(n)
    try:
        if _is_float_data(q_values):
            table = _lookup(q_values)
            _require(n, table)
            off = offsets(n)
            A = [[float(_q(table, n, abs(i + j)) - n) for i in off] for j in off]
            return solve_linear_float(A, [float(v) for v in rhs_vector(n, q_values)])
        R = r_matrix(n, q_values)
        return solve_linear(R, rhs_vector(n, q_values))
    except SingularMatrix:
        raise SingularR(
            "R is singular at this point (repeated ratios); resample or perturb the data"
        ) from None


def condition_number(n: int, q_values: Mapping) -> float:
    """1-norm condition number of R in double precision (inf when singular).

    Float results lose roughly ``condition * 2.2e-16`` relative accuracy.
    """
    _check_n(n)
    table = _lookup(q_values)
    _require(n, table)
    off = offsets(n)
    A = [[float(_q(table, n, abs(i + j)) - n) for i in off] for j in off]
    size = len(A)
    norm = max(sum(abs(A[i][j]) for i in range(size)) for j in range(size))
    try:
        cols = [solve_linear_float(A, [float(i == k) for i in range(size)]) for k in range(size)]
    except SingularMatrix:
        return math.inf
    return norm * max(sum(abs(v) for v in col) for col in cols)


# --------------------------------------------------------------------------
# e_i = E_2(X, X^i) as observable expressions
# --------------------------------------------------------------------------

@lru_cache(maxsize=8)
def e_expressions(n: int) -> dict[int, Expr]:
    """e_i for the basis offsets, in single-index observables q_r."""
    _check_n(n)
    q1 = Expr.q((1,))
    out = {0: 2 * n * q1}
    top = max(offsets(n)) if n > 2 else 0
    if n > 2:
        table = None
        for i in range(1, top + 1):
            expr = e_symbolic(n, i)
            if table is None:
                from .sagbi import generator_expressions_in_q

                table = generator_expressions_in_q(n)
            out[i] = generators_to_q(expr, n, table)
    for i in offsets(n):
        if i < 0:
            out[i] = out[-1 - i]
    return out


def _to_pair_symbols(expr: Expr) -> Expr:
    mapping = {
        s: Expr.q((s.r[0], 0)) for s in expr.symbols() if isinstance(s, ObservableIndex) and s.m == 1
    }
    return expr.substitute(mapping)


def e_values(n: int, q_values: Mapping) -> dict[int, object]:
    table = _lookup(q_values)
    env = {ObservableIndex((r,)): table[ObservableIndex((r, 0))] for r in range(1, n * (n - 1) + 1)}
    exprs = e_expressions(n)
    cache: dict = {}
    out = {}
    for i in offsets(n):
        key = max(i, -1 - i)
        if key not in cache:
            cache[key] = exprs[key].evaluate(env)
        out[i] = cache[key]
    return out


@dataclass(frozen=True)
class E2Evaluation:
    value: object
    uncorrected: object
    lambdas: tuple
    e: dict


def e2_evaluation(n: int, q_values: Mapping) -> E2Evaluation:
    _check_n(n)
    table = _lookup(q_values)
    _require(n, table)
    lam = solve_lambdas(n, table)
    ev = e_values(n, table)
    q1 = table[ObservableIndex((1, 0))]
    lin = sum(l * ev[i] for l, i in zip(lam, offsets(n)))
    corrected = lin + (1 - sum(lam)) * 2 * q1
    return E2Evaluation(normalize(corrected), normalize(lin), tuple(lam), ev)


def e2_from_values(n: int, q_values: Mapping):
    """E_2(X, Y) from observable values, exact for rational inputs."""
    return e2_evaluation(n, q_values).value


# --------------------------------------------------------------------------
# Symbolic formula
# --------------------------------------------------------------------------

def _sum(xs):
    xs = list(xs)
    if any(isinstance(x, Expr) for x in xs):
        return Expr.sum(xs)
    return sum(xs)


def berkowitz_det(A: Sequence[Sequence]):
    """Division-free determinant (Berkowitz); works over any commutative ring.

    Entries may be ints, Fractions or :class:`Expr` nodes.
    """
    n = len(A)
    if n == 0:
        return 1
    if any(len(row) != n for row in A):
        raise InputError("berkowitz_det needs a square matrix")
    C = [1, -A[0][0]]
    for r in range(1, n):
        row = A[r][:r]
        v = [A[i][r] for i in range(r)]
        col = [1, -A[r][r]]
        for _ in range(r):
            col.append(-_sum(a * b for a, b in zip(row, v)))
            v = [_sum(A[i][k] * v[k] for k in range(r)) for i in range(r)]
        C = [_sum(col[i - j] * C[j] for j in range(max(0, i - len(col) + 1), min(i, r) + 1))
             for i in range(r + 2)]
    return C[n] if n % 2 == 0 else -C[n]


@dataclass(frozen=True)
class TripletFormula:
    n: int
    expression: Expr

    @property
    def required_observables(self) -> list[ObservableIndex]:
        return self.expression.observables()

    def evaluate(self, q_values: Mapping):
        return self.expression.evaluate(_lookup(q_values))

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "n": self.n,
            "required_observables": [list(i.r) for i in self.required_observables],
            "expression": self.expression.to_json(),
        }

    def to_text(self) -> str:
        return self.expression.to_text()


@lru_cache(maxsize=4)
def emit_formula(n: int) -> TripletFormula:
    """E_2(X, Y) = 2 q_1 - det(B) / det(R), B = [[R, rhs], [e - 2 q_1, 0]]."""
    _check_n(n)
    off = list(offsets(n))
    qcache: dict = {}

    def qm(r):
        r = abs(r)
        if r not in qcache:
            qcache[r] = Expr.const(n * n - n) if r == 0 else Expr.q((r, 0)) - n
        return qcache[r]

    R = [[qm(i + j) for i in off] for j in off]
    rhs = [Expr.q((s, 1)) - n for s in off]
    q1 = Expr.q((1, 0))
    two_q1 = 2 * q1
    exprs = e_expressions(n)
    w_by_key: dict = {}
    for i in off:
        key = max(i, -1 - i)
        if key == 0:
            w_by_key[0] = (2 * n - 2) * q1
        elif key not in w_by_key:
            w_by_key[key] = _to_pair_symbols(exprs[key]) - two_q1
    w = [w_by_key[max(i, -1 - i)] for i in off]
    B = [R[j] + [rhs[j]] for j in range(len(off))] + [w + [Expr.const(0)]]
    expr = two_q1 - Expr.div(berkowitz_det(B), berkowitz_det(R))
    return TripletFormula(n, expr)


def row_vector_labels(n: int) -> list[str]:
    """The e-entries of the row vector in the displayed order."""
    labels = []
    for i in offsets(n):
        k = max(i, -1 - i)
        labels.append(f"{2 * n}q1" if k == 0 else f"e{k}")
    return labels


# --------------------------------------------------------------------------
# Phase from magnitudes
# --------------------------------------------------------------------------

def cos_triplet_phase(m1, m2, m3, e2_value, *, clamp: bool = False, tol: float = 1e-6):
    """cos(phi) = E_2 / (2 |E_v1| |E_v2| |E_-v1-v2|).

    ``clamp`` is meant for the floating-point pipeline: the result is clipped
    to [-1, 1], with a warning when it lay outside by more than ``tol``.
    """
    for m in (m1, m2, m3):
        if m is None or m <= 0:
            raise ZeroMagnitude("a triplet magnitude is zero; the phase is undefined")
    value = e2_value / (2 * m1 * m2 * m3)
    if isinstance(value, Fraction):
        value = normalize(value)
    if clamp:
        value = float(value)
        if abs(value) > 1 + tol:
            warnings.warn(f"cos(phi) = {value:.9g} lies outside [-1, 1]; clamping", RuntimeWarning)
        value = max(-1.0, min(1.0, value))
    return value


def magnitudes_from_q(q_values: Mapping) -> tuple:
    table = _lookup(q_values)
    _require_triplet(table)
    return tuple(math.sqrt(float(table[ObservableIndex(k)])) for k in ((1, 0), (0, 1), (1, 1)))


def _require_triplet(table):
    missing = [ObservableIndex(k) for k in ((1, 0), (0, 1), (1, 1)) if ObservableIndex(k) not in table]
    if missing:
        raise MissingObservable(missing)
