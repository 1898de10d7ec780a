"""Observables, structure invariants and rational-function expressions over them.

Laurent-polynomial builders:

* :func:`trace_poly`    tr(X_1^{r_1} ... X_m^{r_m})
* :func:`q_poly`        the observable q_r = tr(X^r) tr(X^{-r})
* :func:`E_m_poly`      the m-fold structure invariant
* :func:`e_i_poly`      E_2(X, X^i), a single-array invariant
* :func:`ratio_char_coeffs`  elementary symmetric functions c_1..c_N of the
  N = n(n-1) ratios x_i/x_j

:class:`Expr` is an immutable expression DAG (constants, observable and
generator symbols, +, *, /, unary minus and integer powers). Shared
sub-expressions are kept shared, so large determinant formulas stay small.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DenominatorVanishes, InputError, UndefinedSymbol
from .exactnum import as_rational, format_rational, normalize
from .laurent import LaurentPolynomial, VariableShape

# --------------------------------------------------------------------------
# Observable indices
# --------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class ObservableIndex:
    """Index vector r of q_r, stored with its first nonzero entry positive."""

    r: tuple[int, ...]

    def __post_init__(self):
        r = tuple(int(v) for v in self.r)
        if not r:
            raise InputError("an observable index needs at least one entry")
        lead = next((v for v in r if v), 0)
        if lead < 0:
            r = tuple(-v for v in r)
        object.__setattr__(self, "r", r)

    @classmethod
    def of(cls, value) -> "ObservableIndex":
        if isinstance(value, ObservableIndex):
            return value
        if isinstance(value, int):
            return cls((value,))
        if isinstance(value, str):
            body = value.strip().removeprefix("q").strip("[]() ")
            try:
                return cls(tuple(int(t) for t in body.replace(",", " ").split()))
            except ValueError:
                raise InputError(f"malformed observable index {value!r}") from None
        return cls(tuple(value))

    @property
    def m(self) -> int:
        return len(self.r)

    def is_zero(self) -> bool:
        return not any(self.r)

    def __str__(self) -> str:
        return "q[" + ",".join(str(v) for v in self.r) + "]"


def trace_poly(r: Sequence[int], n: int) -> LaurentPolynomial:
    """tr(X_1^{r_1} ... X_m^{r_m}) as a polynomial in m arrays of n variables."""
    m = len(r)
    shape = VariableShape(m, n)
    terms = {}
    for i in range(n):
        e = [0] * shape.size
        for h in range(m):
            e[h * n + i] = r[h]
        terms[tuple(e)] = terms.get(tuple(e), 0) + 1
    return LaurentPolynomial(shape, terms)


@lru_cache(maxsize=512)
def _q_poly_cached(r: tuple, n: int) -> LaurentPolynomial:
    return trace_poly(r, n) * trace_poly(tuple(-v for v in r), n)


def q_poly(idx, n: int, m: int | None = None) -> LaurentPolynomial:
    """The observable q_r as a degree-zero Laurent polynomial."""
    idx = ObservableIndex.of(idx)
    if m is not None and m != idx.m:
        raise InputError(f"index {idx} has {idx.m} entries, expected {m}")
    return _q_poly_cached(idx.r, n)


@lru_cache(maxsize=64)
def E_m_poly(n: int, m: int) -> LaurentPolynomial:
    """tr(X_1)...tr(X_m) tr((X_1...X_m)^{-1}) plus its mirror."""
    if m < 1:
        raise InputError("m must be at least 1")
    shape = VariableShape(m, n)
    fwd = trace_poly((-1,) * m, n)
    bwd = trace_poly((1,) * m, n)
    for h in range(m):
        unit = [0] * m
        unit[h] = 1
        fwd = fwd * trace_poly(tuple(unit), n)
        bwd = bwd * trace_poly(tuple(-u for u in unit), n)
    assert fwd.shape == shape
    return fwd + bwd


@lru_cache(maxsize=64)
def e_i_poly(n: int, i: int) -> LaurentPolynomial:
    """E_2(X, X^i) as a single-array polynomial."""
    t = lambda k: trace_poly((k,), n)  # noqa: E731
    return t(1) * t(i) * t(-1 - i) + t(-1) * t(-i) * t(1 + i)


@lru_cache(maxsize=8)
def ratio_char_coeffs(n: int) -> tuple[LaurentPolynomial, ...]:
    """c_1..c_N: elementary symmetric functions of the ratios x_i/x_j, i != j."""
    if n < 2:
        raise InputError("n must be at least 2")
    shape = VariableShape(1, n)
    ratios = []
    for i in range(n):
        for j in range(n):
            if i != j:
                e = [0] * n
                e[i], e[j] = 1, -1
                ratios.append(LaurentPolynomial._raw(shape, {tuple(e): 1}))
    # coefficients of prod (1 + r t), built one factor at a time
    coeffs = [LaurentPolynomial.constant(shape, 1)]
    for r in ratios:
        nxt = coeffs + [LaurentPolynomial.zero(shape)]
        for k in range(len(coeffs), 0, -1):
            nxt[k] = nxt[k] + coeffs[k - 1] * r
        coeffs = nxt
    return tuple(coeffs[1:])


@lru_cache(maxsize=4)
def p_generator_poly(n: int = 4) -> LaurentPolynomial:
    """p = s_2(X) s_2(X^{-1}), the extra generator at n = 4."""
    shape = VariableShape(1, n)
    fwd, bwd = {}, {}
    for i in range(n):
        for j in range(i + 1, n):
            e = [0] * n
            e[i] = e[j] = 1
            fwd[tuple(e)] = 1
            bwd[tuple(-v for v in e)] = 1
    return LaurentPolynomial(shape, fwd) * LaurentPolynomial(shape, bwd)


def generator_poly(name: str, n: int) -> LaurentPolynomial:
    """Laurent definition of a generator symbol ``c<i>`` or ``p``."""
    if name == "p":
        if n != 4:
            raise UndefinedSymbol("generator p is only defined for n = 4")
        return p_generator_poly(4)
    if name.startswith("c") and name[1:].isdigit():
        i = int(name[1:])
        N = n * (n - 1)
        if 1 <= i <= N:
            return ratio_char_coeffs(n)[i - 1]
        if i == 0:
            return LaurentPolynomial.constant(VariableShape(1, n), 1)
    raise UndefinedSymbol(f"unknown generator {name!r} for n = {n}")


# --------------------------------------------------------------------------
# Expression DAG
# --------------------------------------------------------------------------

_PREC = {"add": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}


class Expr:
    """Node of a rational-function expression.

    ``op`` is one of ``const``, ``q``, ``gen``, ``add``, ``mul``, ``div``,
    ``neg``, ``pow``. Leaves keep their payload in ``value`` (a rational,
    an :class:`ObservableIndex` or a generator name); ``pow`` keeps its
    integer exponent there.
    """

    __slots__ = ("op", "args", "value")

    def __init__(self, op: str, args: tuple = (), value=None):
        self.op = op
        self.args = args
        self.value = value

    # -- leaves ------------------------------------------------------------
    @classmethod
    def const(cls, c) -> "Expr":
        return cls("const", (), as_rational(c))

    @classmethod
    def q(cls, idx) -> "Expr":
        return cls("q", (), ObservableIndex.of(idx))

    @classmethod
    def gen(cls, name: str) -> "Expr":
        return cls("gen", (), str(name))

    @staticmethod
    def lift(x) -> "Expr":
        if isinstance(x, Expr):
            return x
        return Expr.const(x)

    def is_const(self, c=None) -> bool:
        return self.op == "const" and (c is None or self.value == c)

    # -- smart constructors (constant folding) -------------------------------
    @classmethod
    def add(cls, *terms) -> "Expr":
        args, acc = [], 0
        for t in map(cls.lift, terms):
            if t.op == "const":
                acc += t.value
            else:
                args.append(t)
        if acc or not args:
            args.append(cls.const(normalize(acc)))
        return args[0] if len(args) == 1 else cls("add", tuple(args))

    @classmethod
    def mul(cls, *factors) -> "Expr":
        args, acc = [], 1
        for f in map(cls.lift, factors):
            if f.op == "neg":
                acc, f = -acc, f.args[0]
            if f.op == "mul" and f.args[0].op == "const":
                acc *= f.args[0].value
                args.extend(f.args[1:])
            elif f.op == "const":
                acc *= f.value
            else:
                args.append(f)
        if acc == 0:
            return cls.const(0)
        if not args:
            return cls.const(normalize(acc))
        if acc == -1:
            body = args[0] if len(args) == 1 else cls("mul", tuple(args))
            return cls("neg", (body,))
        if acc != 1:
            args.insert(0, cls.const(normalize(acc)))
        return args[0] if len(args) == 1 else cls("mul", tuple(args))

    @classmethod
    def div(cls, a, b) -> "Expr":
        a, b = cls.lift(a), cls.lift(b)
        if b.op == "const":
            if b.value == 0:
                raise DenominatorVanishes("division by the constant 0")
            return cls.mul(a, cls.const(Fraction(1) / b.value))
        if a.is_const(0):
            return a
        return cls("div", (a, b))

    @classmethod
    def neg(cls, a) -> "Expr":
        a = cls.lift(a)
        if a.op == "const":
            return cls.const(-a.value)
        if a.op == "neg":
            return a.args[0]
        return cls("neg", (a,))

    @classmethod
    def pow(cls, a, k: int) -> "Expr":
        a = cls.lift(a)
        k = int(k)
        if k == 0:
            return cls.const(1)
        if k == 1:
            return a
        if a.op == "const":
            if a.value == 0 and k < 0:
                raise DenominatorVanishes("negative power of 0")
            return cls.const(normalize(Fraction(a.value) ** k))
        return cls("pow", (a,), k)

    @classmethod
    def sum(cls, terms: Iterable) -> "Expr":
        return cls.add(*list(terms))

    @classmethod
    def product(cls, factors: Iterable) -> "Expr":
        return cls.mul(*list(factors))

    # -- operators ---------------------------------------------------------
    def __add__(self, o):
        return Expr.add(self, o)

    def __radd__(self, o):
        return Expr.add(o, self)

    def __sub__(self, o):
        return Expr.add(self, Expr.neg(o))

    def __rsub__(self, o):
        return Expr.add(o, Expr.neg(self))

    def __mul__(self, o):
        return Expr.mul(self, o)

    def __rmul__(self, o):
        return Expr.mul(o, self)

    def __truediv__(self, o):
        return Expr.div(self, o)

    def __rtruediv__(self, o):
        return Expr.div(o, self)

    def __neg__(self):
        return Expr.neg(self)

    def __pow__(self, k):
        return Expr.pow(self, k)

    # -- traversal ---------------------------------------------------------
    def nodes(self) -> list["Expr"]:
        """Distinct nodes in post-order (children before parents)."""
        order, seen = [], set()
        stack = [(self, False)]
        while stack:
            node, done = stack.pop()
            if done:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for a in reversed(node.args):
                if id(a) not in seen:
                    stack.append((a, False))
        return order

    def size(self) -> int:
        return len(self.nodes())

    def symbols(self) -> set:
        """Observable indices and generator names used."""
        out = set()
        for node in self.nodes():
            if node.op in ("q", "gen"):
                out.add(node.value)
        return out

    def observables(self) -> list[ObservableIndex]:
        return sorted(s for s in self.symbols() if isinstance(s, ObservableIndex))

    def fold(self, leaf: Callable, combine: Mapping[str, Callable]):
        """Bottom-up evaluation over the DAG, each node visited once."""
        memo: dict = {}
        for node in self.nodes():
            if not node.args:
                memo[id(node)] = leaf(node)
            else:
                memo[id(node)] = combine[node.op](node, [memo[id(a)] for a in node.args])
        return memo[id(self)]

    def substitute(self, mapping: Mapping) -> "Expr":
        """Replace symbols (ObservableIndex or generator name) by expressions."""
        def leaf(node):
            if node.op in ("q", "gen") and node.value in mapping:
                return Expr.lift(mapping[node.value])
            return node

        def rebuild(node, args):
            if all(a is b for a, b in zip(args, node.args)):
                return node
            return _BUILD[node.op](node, args)

        return self.fold(leaf, {op: rebuild for op in _PREC})

    def as_polynomial(self):
        """Expanded :class:`~tripletphase.symfun.SymPoly` in the symbols, or None.

        None is returned when a division by a non-constant occurs.
        """
        from .symfun import SymPoly

        def leaf(node):
            if node.op == "const":
                return SymPoly.const(node.value)
            return SymPoly.var(symbol_name(node.value) if node.op == "q" else node.value)

        def div(node, a):
            if a[0] is None or a[1] is None or not a[1].is_constant():
                return None
            return a[0] / a[1].constant_term()

        def lifted(fn):
            return lambda node, a: None if any(x is None for x in a) else fn(node, a)

        combine = {
            "add": lifted(lambda node, a: sum(a[1:], a[0])),
            "mul": lifted(lambda node, a: _product(a)),
            "neg": lifted(lambda node, a: -a[0]),
            "pow": lifted(lambda node, a: a[0] ** node.value if node.value >= 0 else None),
            "div": div,
        }
        return self.fold(leaf, combine)

    # -- evaluation --------------------------------------------------------
    def evaluate(self, env: Mapping):
        """Exact value under a total assignment of the symbols.

        Keys of ``env`` are :class:`ObservableIndex` values (or anything
        :meth:`ObservableIndex.of` accepts) and generator names.
        """
        table = _normalize_env(env)

        def leaf(node):
            if node.op == "const":
                return node.value
            try:
                return table[node.value]
            except KeyError:
                raise UndefinedSymbol(f"no value for symbol {_sym_text(node)}") from None

        return _numeric(self.fold(leaf, _EVAL))

    def expand(self, n: int, m: int | None = None) -> tuple[LaurentPolynomial, LaurentPolynomial]:
        """Substitute Laurent definitions; returns (numerator, denominator)."""
        if m is None:
            qs = [s for s in self.symbols() if isinstance(s, ObservableIndex)]
            m = qs[0].m if qs else 1
        shape = VariableShape(m, n)
        one = LaurentPolynomial.constant(shape, 1)

        def leaf(node):
            if node.op == "const":
                return (LaurentPolynomial.constant(shape, node.value), one)
            if node.op == "q":
                if node.value.m != m:
                    raise UndefinedSymbol(f"{node.value} does not have {m} entries")
                return (q_poly(node.value, n), one)
            g = generator_poly(node.value, n)
            return (g if m == 1 else g.embed(shape, 1), one)

        return self.fold(leaf, _EXPAND)

    # -- serialisation -----------------------------------------------------
    def to_json(self) -> dict:
        """Nested ``{"op", "args"}`` tree; repeated inner nodes go to ``defs``."""
        order = self.nodes()
        refcount: dict = {}
        for node in order:
            for a in node.args:
                refcount[id(a)] = refcount.get(id(a), 0) + 1
        shared = {id(nd) for nd in order if nd.args and refcount.get(id(nd), 0) > 1}
        ids: dict = {}
        defs = []

        def encode(node, top=False):
            if id(node) in ids and not top:
                return {"ref": ids[id(node)]}
            if node.op == "const":
                v = node.value
                return {"const": v if isinstance(v, int) else format_rational(v)}
            if node.op == "q":
                return {"q": list(node.value.r)}
            if node.op == "gen":
                return {"gen": node.value}
            out = {"op": node.op, "args": [encode(a) for a in node.args]}
            if node.op == "pow":
                out["exp"] = node.value
            return out

        for node in order:
            if id(node) in shared:
                defs.append(encode(node, top=True))
                ids[id(node)] = len(defs) - 1
        root = encode(self, top=True)
        if not defs:
            return root
        return {"defs": defs, "root": root}

    @classmethod
    def from_json(cls, data) -> "Expr":
        if isinstance(data, str):
            data = json.loads(data)
        table: list = []

        def decode(d):
            if "ref" in d:
                return table[d["ref"]]
            if "const" in d:
                return cls.const(as_rational(d["const"]))
            if "q" in d:
                return cls.q(tuple(d["q"]))
            if "gen" in d:
                return cls.gen(d["gen"])
            op = d.get("op")
            if op not in _PREC:
                raise InputError(f"unknown expression node {d!r}")
            args = [decode(a) for a in d["args"]]
            return _BUILD[op](Expr(op, (), d.get("exp")), args)

        if "root" in data:
            for d in data.get("defs", []):
                table.append(decode(d))
            return decode(data["root"])
        return decode(data)

    def to_text(self) -> str:
        """Infix rendering; shared sub-expressions become numbered bindings."""
        order = self.nodes()
        refcount: dict = {}
        for node in order:
            for a in node.args:
                refcount[id(a)] = refcount.get(id(a), 0) + 1
        names: dict = {}
        lines = []
        rendered: dict = {}
        for node in order:
            text = _render(node, rendered)
            rendered[id(node)] = (text, _prec(node))
            if node.args and refcount.get(id(node), 0) > 1 and node is not self:
                name = f"t{len(names) + 1}"
                names[id(node)] = name
                lines.append(f"{name} = {text}")
                rendered[id(node)] = (name, 5)
        lines.append(rendered[id(self)][0] if not lines else f"result = {rendered[id(self)][0]}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        text = self.to_text()
        return f"Expr({text if len(text) < 200 else text[:197] + '...'})"


def symbol_name(idx: ObservableIndex) -> str:
    """Identifier form of an observable: q[2] -> q2, q[1,-1] -> q1_m1."""
    return "q" + "_".join(str(r) if r >= 0 else f"m{-r}" for r in idx.r)


_SYMBOL_NAME = re.compile(r"\bq(m?\d+(?:_m?\d+)+)\b")


def polynomial_text(poly) -> str:
    """Format a SymPoly in observable identifiers, pairs shown as q[a,b]."""
    def back(mt):
        parts = [p.replace("m", "-") for p in mt.group(1).split("_")]
        return f"q[{','.join(parts)}]"

    return _SYMBOL_NAME.sub(back, poly.format())


def _product(items):
    out = items[0]
    for x in items[1:]:
        out = out * x
    return out


def _prec(node: Expr) -> int:
    if node.op == "const":
        return 5 if node.value >= 0 and isinstance(node.value, int) else 3
    return _PREC.get(node.op, 5)


def _sym_text(node: Expr) -> str:
    return str(node.value) if node.op == "q" else node.value


def _render(node: Expr, rendered: dict) -> str:
    if node.op == "const":
        return format_rational(node.value)
    if node.op in ("q", "gen"):
        return _sym_text(node)
    parts = [rendered[id(a)] for a in node.args]
    me = _PREC[node.op]

    def wrap(p, strict=False):
        text, prec = p
        return f"({text})" if prec < me or (strict and prec == me) else text

    if node.op == "add":
        out = parts[0][0]
        for text, prec in parts[1:]:
            if text.startswith("-") and prec >= 2:
                out += " - " + text[1:]
            else:
                out += " + " + text
        return out
    if node.op == "mul":
        return "*".join(wrap(p) for p in parts)
    if node.op == "div":
        return f"{wrap(parts[0])} / {wrap(parts[1], strict=True)}"
    if node.op == "neg":
        text, prec = parts[0]
        return "-" + (f"({text})" if prec < _PREC["mul"] or text.startswith("-") else text)
    return f"{wrap(parts[0], strict=True)}^{node.value}"


def _normalize_env(env: Mapping) -> dict:
    table = {}
    for k, v in env.items():
        if isinstance(k, str) and (k == "p" or (k.startswith("c") and k[1:].isdigit())):
            table[k] = v
        else:
            table[ObservableIndex.of(k)] = v
    return table


def _numeric(v):
    return normalize(v) if isinstance(v, (int, Fraction)) else v


def _is_zero(v) -> bool:
    return v == 0


def _eval_div(node, a):
    num, den = a
    if _is_zero(den):
        raise DenominatorVanishes("denominator evaluates to zero")
    if isinstance(num, int) and isinstance(den, int):
        return Fraction(num, den)
    return num / den


def _eval_pow(node, a):
    (base,) = a
    k = node.value
    if k < 0:
        if _is_zero(base):
            raise DenominatorVanishes("negative power of zero")
        if isinstance(base, int):
            base = Fraction(base)
        return (1 / base) ** -k
    return base ** k


def _eval_add(node, a):
    total = a[0]
    for v in a[1:]:
        total = total + v
    return total


def _eval_mul(node, a):
    total = a[0]
    for v in a[1:]:
        total = total * v
    return total


_EVAL = {
    "add": _eval_add,
    "mul": _eval_mul,
    "div": _eval_div,
    "neg": lambda node, a: -a[0],
    "pow": _eval_pow,
}


def _x_add(node, a):
    num, den = a[0]
    for n2, d2 in a[1:]:
        if den == d2:
            num = num + n2
        elif d2 == 1:
            num = num + n2 * den
        elif den == 1:
            num, den = num * d2 + n2, d2
        else:
            num, den = num * d2 + n2 * den, den * d2
    return num, den


def _x_mul(node, a):
    num, den = a[0]
    for n2, d2 in a[1:]:
        num = num * n2
        den = den if d2 == 1 else (d2 if den == 1 else den * d2)
    return num, den


def _x_div(node, a):
    (n1, d1), (n2, d2) = a
    if n2.is_zero():
        raise DenominatorVanishes("denominator expands to the zero polynomial")
    return n1 * d2, d1 * n2


def _x_pow(node, a):
    ((num, den),) = a
    k = node.value
    if k < 0:
        if num.is_zero():
            raise DenominatorVanishes("negative power of the zero polynomial")
        num, den, k = den, num, -k
    return num ** k, den ** k


_EXPAND = {
    "add": _x_add,
    "mul": _x_mul,
    "div": _x_div,
    "neg": lambda node, a: (-a[0][0], a[0][1]),
    "pow": _x_pow,
}

_BUILD = {
    "add": lambda node, a: Expr.add(*a),
    "mul": lambda node, a: Expr.mul(*a),
    "div": lambda node, a: Expr.div(*a),
    "neg": lambda node, a: Expr.neg(a[0]),
    "pow": lambda node, a: Expr.pow(a[0], node.value),
}


def expression_expand(expr: Expr, n: int, m: int | None = None):
    return expr.expand(n, m)


def from_sympoly(poly, symbol: Callable[[str], Expr]) -> Expr:
    """Convert a :class:`~tripletphase.symfun.SymPoly` using ``symbol(name)`` for leaves."""
    leaves: dict = {}

    def leaf(name):
        if name not in leaves:
            leaves[name] = symbol(name)
        return leaves[name]

    terms = []
    for mono, c in poly.sorted_terms():
        factors = [Expr.pow(leaf(v), k) for v, k in mono]
        terms.append(Expr.mul(c, *factors))
    return Expr.sum(terms)


def observable_values(point_x, point_y=None, indices: Iterable = ()) -> dict:
    """Exact q-values at a point for the requested indices.

    With ``point_y`` the indices are pairs (a, b) for q_{a,b}; otherwise
    single integers r.
    """
    out = {}
    for idx in indices:
        idx = ObservableIndex.of(idx)
        if point_y is None:
            r = idx.r[0]
            out[idx] = _trace_value(point_x, r) * _trace_value(point_x, -r)
        else:
            a, b = idx.r
            fwd = sum(x ** a * y ** b for x, y in zip(_frac(point_x), _frac(point_y)))
            bwd = sum(x ** -a * y ** -b for x, y in zip(_frac(point_x), _frac(point_y)))
            out[idx] = normalize(fwd * bwd)
    return out


def _frac(point):
    return [Fraction(v) if isinstance(v, int) else v for v in point]


def _trace_value(point, r: int):
    return sum(v ** r for v in _frac(point))


def E2_value(x: Sequence, y: Sequence):
    """Direct E_2(X, Y) from the trace formula (exact for rationals)."""
    x, y = _frac(x), _frac(y)
    tx = sum(x)
    ty = sum(y)
    txi = sum(1 / v for v in x)
    tyi = sum(1 / v for v in y)
    txy = sum(a * b for a, b in zip(x, y))
    txyi = sum(1 / (a * b) for a, b in zip(x, y))
    return _numeric(tx * ty * txyi + txi * tyi * txy)
