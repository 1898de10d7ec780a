"""The group G = S_n x T acting on Laurent polynomials and on ratio indices.

T = {1, tau} with tau(x) = 1/x. Elements are ``(sigma, epsilon)`` with
``epsilon = -1`` meaning tau. Permutations are stored 0-based internally;
ratio indices (i, j) are 1-based as in the usual matrix picture.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, NamedTuple, Sequence

from .errors import InputError, NotDegreeZero, RequiresNAtLeast3
from .laurent import LaurentPolynomial, psum


@dataclass(frozen=True)
class GroupElement:
    sigma: tuple[int, ...]  # sigma[j] is the image of j, 0-based
    epsilon: int = 1

    def __post_init__(self):
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise InputError(f"not a permutation: {self.sigma}")
        if self.epsilon not in (1, -1):
            raise InputError("epsilon must be +1 or -1")

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(tuple(range(n)), 1)

    @classmethod
    def tau(cls, n: int) -> "GroupElement":
        return cls(tuple(range(n)), -1)

    @classmethod
    def from_cycle(cls, n: int, *cycle: int, epsilon: int = 1) -> "GroupElement":
        """Build from a 1-based cycle, e.g. ``from_cycle(3, 1, 2)`` for (1 2)."""
        sigma = list(range(n))
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            sigma[a - 1] = b - 1
        return cls(tuple(sigma), epsilon)

    @property
    def n(self) -> int:
        return len(self.sigma)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        # (s1, e1)(s2, e2) = (s1 o s2, e1 e2)
        return GroupElement(tuple(self.sigma[j] for j in other.sigma), self.epsilon * other.epsilon)

    def inverse(self) -> "GroupElement":
        inv = [0] * self.n
        for j, s in enumerate(self.sigma):
            inv[s] = j
        return GroupElement(tuple(inv), self.epsilon)

    def is_identity(self) -> bool:
        return self.epsilon == 1 and self.sigma == tuple(range(self.n))

    def __repr__(self) -> str:
        images = ",".join(str(s + 1) for s in self.sigma)
        return f"GroupElement([{images}]{', tau' if self.epsilon < 0 else ''})"


@lru_cache(maxsize=None)
def group_elements(n: int) -> tuple[GroupElement, ...]:
    """All 2*n! elements, identity first."""
    return tuple(
        GroupElement(s, e) for e in (1, -1) for s in permutations(range(n))
    )


def act(g: GroupElement, p: LaurentPolynomial) -> LaurentPolynomial:
    """x_{h,j} -> x_{h,sigma(j)}^epsilon, the same g on every array."""
    return act_per_array([g] * p.shape.m, p)


def act_per_array(gs: Sequence[GroupElement], p: LaurentPolynomial) -> LaurentPolynomial:
    """Apply ``gs[h]`` to array h; used for the G^m action."""
    n, m = p.shape.n, p.shape.m
    if len(gs) != m or any(g.n != n for g in gs):
        raise InputError("need one group element of degree n per array")
    out = {}
    for e, c in p._terms.items():
        f = [0] * (n * m)
        for h, g in enumerate(gs):
            base = h * n
            for j in range(n):
                k = e[base + j]
                if k:
                    f[base + g.sigma[j]] = g.epsilon * k
        out[tuple(f)] = c
    return LaurentPolynomial._raw(p.shape, out)


def reynolds(p: LaurentPolynomial) -> LaurentPolynomial:
    """Average over G. Divides by |G| = 2 n! even for n = 2."""
    if not p.is_degree_zero():
        raise NotDegreeZero("the Reynolds operator is applied to degree-zero polynomials")
    elems = group_elements(p.shape.n)
    total = psum((act(g, p) for g in elems), p.shape)
    return total.scale(Fraction(1, len(elems)))


def _generators(n: int) -> list[GroupElement]:
    gens = [GroupElement.tau(n), GroupElement.from_cycle(n, 1, 2)]
    if n > 2:
        gens.append(GroupElement.from_cycle(n, *range(1, n + 1)))
    return gens


def is_invariant(p: LaurentPolynomial) -> bool:
    """Weight zero per array, tau-fixed, and fixed by diagonal S_n."""
    if not p.is_degree_zero():
        return False
    return all(act(g, p) == p for g in _generators(p.shape.n))


# --------------------------------------------------------------------------
# Ratio index set Lambda and the embedding G -> Sym(Lambda)
# --------------------------------------------------------------------------

class LambdaIndex(NamedTuple):
    i: int
    j: int


@lru_cache(maxsize=None)
def lambda_set(n: int) -> tuple[LambdaIndex, ...]:
    """The N = n(n-1) ordered pairs (i, j), i != j, 1-based, lexicographic."""
    return tuple(LambdaIndex(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j)


@lru_cache(maxsize=None)
def lambda_position(n: int) -> dict:
    return {x: k for k, x in enumerate(lambda_set(n))}


def opposite(a: Sequence[int], b: Sequence[int]) -> bool:
    return a[0] == b[1] and a[1] == b[0]


def adjacent(a: Sequence[int], b: Sequence[int]) -> bool:
    return (a[0] == b[1]) != (a[1] == b[0])


def act_on_lambda(g: GroupElement, x: LambdaIndex) -> LambdaIndex:
    i, j = g.sigma[x.i - 1] + 1, g.sigma[x.j - 1] + 1
    return LambdaIndex(j, i) if g.epsilon < 0 else LambdaIndex(i, j)


@lru_cache(maxsize=None)
def lambda_permutation(g: GroupElement) -> tuple[int, ...]:
    """g as a permutation of positions 0..N-1 of ``lambda_set(n)``."""
    pos = lambda_position(g.n)
    return tuple(pos[act_on_lambda(g, x)] for x in lambda_set(g.n))


@lru_cache(maxsize=None)
def embedded_group(n: int) -> dict[tuple[int, ...], GroupElement]:
    """Lookup table from Lambda-permutations to group elements.

    For n = 2 the map is not injective; the first preimage is kept.
    """
    table: dict = {}
    for g in group_elements(n):
        table.setdefault(lambda_permutation(g), g)
    return table


@lru_cache(maxsize=None)
def _relation_pairs(n: int) -> tuple[tuple, tuple]:
    lam = lambda_set(n)
    N = len(lam)
    opp = tuple((a, b) for a in range(N) for b in range(N) if opposite(lam[a], lam[b]))
    adj = tuple((a, b) for a in range(N) for b in range(a + 1, N) if adjacent(lam[a], lam[b]))
    return opp, adj


def preserves_relations(h: Sequence[int], n: int) -> bool:
    """Whether a permutation of Lambda positions preserves adjacency and opposition."""
    if n < 3:
        raise RequiresNAtLeast3("the adjacency/opposition characterisation needs n >= 3")
    lam = lambda_set(n)
    if sorted(h) != list(range(len(lam))):
        raise InputError("h must be a permutation of the Lambda positions")
    opp, adj = _relation_pairs(n)
    for a, b in opp:
        if not opposite(lam[h[a]], lam[h[b]]):
            return False
    for a, b in adj:
        if not adjacent(lam[h[a]], lam[h[b]]):
            return False
    return True


def fixing_pairs(p: LaurentPolynomial) -> list[tuple[GroupElement, ...]]:
    """All tuples in G^m whose per-array action fixes ``p``."""
    n, m = p.shape.n, p.shape.m
    return [
        gs for gs in product(group_elements(n), repeat=m) if act_per_array(gs, p) == p
    ]


def orbit(p: LaurentPolynomial) -> Iterable[LaurentPolynomial]:
    return (act(g, p) for g in group_elements(p.shape.n))
