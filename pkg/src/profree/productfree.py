"""Product-free subsets: checking, exact maxima, the abelian formula, lifting."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .groups import Group, GroupError, GroupSubset, quotient

# cross masks are tabulated up front below this order, computed per step above
_TABLE_LIMIT = 256


class NotProductFreeError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    a: int
    b: int
    c: int


@dataclass(frozen=True)
class AlphaResult:
    alpha: int
    witness: GroupSubset
    nodes: int
    exact: bool

    @property
    def beta(self) -> Fraction:
        return Fraction(self.alpha, self.witness.group.n)


def find_violation(s: GroupSubset) -> Violation | None:
    """Least ``(a, b)`` (lexicographically) with a, b and ab all in ``s``."""
    el = s.elements
    if el.size == 0:
        return None
    prod = s.group.mul[np.ix_(el, el)]
    hit = np.flatnonzero(s.bits[prod])
    if hit.size == 0:
        return None
    i, j = divmod(int(hit[0]), el.size)
    return Violation(int(el[i]), int(el[j]), int(prod[i, j]))


def is_product_free(s: GroupSubset) -> bool:
    return find_violation(s) is None


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


class _Conflicts:
    """Bitmasks of elements that cannot join a product-free set.

    ``own(x)`` holds e, x^2 and the square roots of x. ``cross(x, c)``
    holds every y for which {x, c, y} contains a solution of ab = d that
    uses y, namely xc, cx, x^-1 c, c^-1 x, c x^-1 and x c^-1.
    """

    def __init__(self, g: Group):
        self.g = g
        n = g.n
        ar = np.arange(n)
        sq = g.mul[ar, ar]
        roots: list[list[int]] = [[] for _ in range(n)]
        for y, s in enumerate(sq.tolist()):
            roots[s].append(y)
        self.own = [_mask([0, sq[x], *roots[x]]) for x in range(n)]
        self.table = None
        if n <= _TABLE_LIMIT:
            self.table = [[_mask(self._cross_elems(x, np.array([c]))) for c in range(n)] for x in range(n)]

    def _cross_elems(self, x: int, cs: np.ndarray) -> np.ndarray:
        mul, inv = self.g.mul, self.g.inv
        ix, ic = inv[x], inv[cs]
        return np.concatenate(
            [mul[x, cs], mul[cs, x], mul[ix, cs], mul[ic, x], mul[cs, ix], mul[x, ic]]
        )

    def adding(self, x: int, chosen: list[int]) -> int:
        m = self.own[x] | (1 << x)
        if not chosen:
            return m
        if self.table is not None:
            row = self.table[x]
            for c in chosen:
                m |= row[c]
            return m
        return m | _mask(np.unique(self._cross_elems(x, np.array(chosen))).tolist())


def alpha_exact(g: Group, time_budget: float | None = 60.0) -> AlphaResult:
    """Largest product-free subset by branch and bound.

    Depth-first search over elements in index order, trying "include"
    before "exclude". A node is pruned when ``|chosen| + |candidates|`` or
    the general cap ``n // 2`` (xS and S are disjoint for x in S) cannot beat
    the incumbent. Because improvements must be strict, the first maximum
    set reached is the lexicographically least one. When the wall-clock
    budget runs out the best set so far is returned with ``exact=False``.
    """
    n = g.n
    conf = _Conflicts(g)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    cap = n // 2
    best_size, best_set = 0, 0
    nodes = 0
    exact = True
    chosen: list[int] = []
    # stack entries: (chosen-set mask, candidates, depth of chosen list)
    stack = [(0, ((1 << n) - 1) & ~1, 0)]
    while stack:
        cmask, cand, depth = stack.pop()
        del chosen[depth:]
        nodes += 1
        if deadline is not None and nodes & 1023 == 0 and time.monotonic() > deadline:
            exact = False
            break
        size = depth
        if size > best_size:
            best_size, best_set = size, cmask
            if best_size >= cap:
                break
        if not cand:
            continue
        if size + min(cand.bit_count(), cap - size) <= best_size:
            continue
        low = cand & -cand
        x = low.bit_length() - 1
        # exclude branch is pushed first so that include is explored first
        stack.append((cmask, cand & ~low, depth))
        killed = conf.adding(x, chosen)
        chosen.append(x)
        stack.append((cmask | low, cand & ~killed, depth + 1))
    bits = np.array([(best_set >> i) & 1 for i in range(n)], dtype=bool)
    witness = GroupSubset(g, bits)
    return AlphaResult(best_size, witness, nodes, exact)


def green_ruzsa_alpha(factors: Sequence[int]) -> int:
    """Maximum product-free size of the abelian group with these cyclic factors.

    Any cyclic decomposition works, since only the order and the exponent
    enter the formula.
    """
    if not factors:
        raise ValueError("need at least one cyclic factor")
    if any(int(f) < 1 for f in factors):
        raise ValueError("cyclic factors must be positive")
    n = math.prod(int(f) for f in factors)
    p = _smallest_2mod3_prime(n)
    if p is not None:
        value = Fraction(n, 3) + Fraction(n, 3 * p)
    elif n % 3 == 0:
        value = Fraction(n, 3)
    else:
        m = reduce(math.lcm, (int(f) for f in factors), 1)
        value = Fraction(n, 3) - Fraction(n, 3 * m)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral value {value} for factors {list(factors)}")
    return int(value)


def _smallest_2mod3_prime(n: int) -> int | None:
    r, p = n, 2
    while p * p <= r:
        if r % p == 0:
            if p % 3 == 2:
                return p
            while r % p == 0:
                r //= p
        p += 1
    if r > 1 and r % 3 == 2:
        return r
    return None


def lift_from_quotient(g: Group, nsub: GroupSubset, s_quot: GroupSubset) -> GroupSubset:
    """Preimage in G of a product-free subset of G/N."""
    h, proj = quotient(g, nsub)
    if s_quot.group.n != h.n or not np.array_equal(s_quot.group.mul, h.mul):
        raise GroupError("subset does not live on the quotient G/N")
    if not is_product_free(s_quot):
        raise NotProductFreeError("subset of the quotient is not product-free")
    return GroupSubset(g, s_quot.bits[proj])
