"""Lower-bound constructions of product-free sets from transitive actions.

The base point is point 0. All sets are fibres of the map g -> g(0), cut
down by conditions on the images of a few more points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
import numpy as np

from .groups import GroupError, GroupSubset, PermAction, set_inverse


@dataclass(frozen=True)
class TargetSet:
    action: PermAction
    points: tuple[int, ...]

    def __post_init__(self):
        pts = tuple(sorted(set(int(p) for p in self.points)))
        if any(not 0 <= p < self.action.m for p in pts):
            raise GroupError(f"points must lie in 0..{self.action.m - 1}")
        object.__setattr__(self, "points", pts)

    @property
    def k(self) -> int:
        return len(self.points)

    def mask(self) -> np.ndarray:
        out = np.zeros(self.action.m, dtype=bool)
        out[list(self.points)] = True
        return out


@dataclass(frozen=True)
class TripleFamily:
    A: GroupSubset
    B: GroupSubset
    C: GroupSubset

    @property
    def solutions(self) -> int:
        """Number of pairs (a, b) in A x B with ab in C."""
        g = self.A.group
        a, b = self.A.elements, self.B.elements
        if a.size == 0 or b.size == 0:
            return 0
        return int(self.C.bits[g.mul[np.ix_(a, b)]].sum())

    @property
    def product(self) -> int:
        return self.A.card * self.B.card * self.C.card


def _transitive(act: PermAction) -> None:
    if act.m < 2 or not act.is_transitive:
        raise GroupError("a transitive action on at least two points is required")


def babai_sos(act: PermAction, p: int = 0, q: int = 1) -> GroupSubset:
    """``{g : g(p) = q}``, a coset of a point stabiliser, of size n/m."""
    _transitive(act)
    if p == q:
        raise GroupError("p and q must differ")
    if not (0 <= p < act.m and 0 <= q < act.m):
        raise GroupError("point out of range")
    return GroupSubset(act.group, act.act[:, p] == q)


def kedlaya_set(act: PermAction, t: TargetSet) -> GroupSubset:
    """``{g : g(0) in T and g(y) not in T for every y in T}``.

    Product-free because ``(ab)(0) = a(b(0))`` with ``b(0) in T`` lands
    outside T.
    """
    _transitive(act)
    if t.k == 0:
        raise GroupError("T must be nonempty")
    if 0 in t.points:
        raise GroupError("T must not contain the base point 0")
    in_t = t.mask()
    hits = in_t[act.act[:, 0]]
    blocked = in_t[act.act[:, list(t.points)]].any(axis=1)
    return GroupSubset(act.group, hits & ~blocked)


def default_k(m: int) -> int:
    return max(1, round(math.sqrt(m / 3)))


def kedlaya_bound(n: int, m: int, k: int) -> Fraction:
    """Lower bound ``kn/m - k^3 n/(m-2)^2`` for the mean size over T."""
    return Fraction(k * n, m) - Fraction(k**3 * n, (m - 2) ** 2)


def sample_points(rng: np.random.Generator, m: int, k: int) -> tuple[int, ...]:
    """k distinct points of 1..m-1 by a partial Fisher-Yates shuffle."""
    pool = list(range(1, m))
    for i in range(k):
        j = i + int(rng.integers(0, len(pool) - i))
        pool[i], pool[j] = pool[j], pool[i]
    return tuple(sorted(pool[:k]))


@dataclass(frozen=True)
class AvoidingSample:
    best: GroupSubset
    best_points: tuple[int, ...]
    mean: float
    stderr: float
    sizes: np.ndarray
    k: int
    trials: int
    seed: int


def kedlaya_randomized(
    act: PermAction, k: int | None = None, trials: int = 1000, seed: int = 0
) -> AvoidingSample:
    """Target-avoiding sets for ``trials`` random k-subsets T of 1..m-1.

    Trial i draws T from a generator seeded with ``(seed, i)``, so the
    result does not depend on the order the trials are run in.
    """
    _transitive(act)
    m = act.m
    k = default_k(m) if k is None else int(k)
    if not 1 <= k <= m - 1:
        raise GroupError(f"k must lie in 1..{m - 1}")
    if trials < 1:
        raise ValueError("trials must be positive")
    sizes = np.empty(trials, dtype=np.int64)
    best, best_pts = None, ()
    for i in range(trials):
        pts = sample_points(np.random.default_rng([seed, i]), m, k)
        s = kedlaya_set(act, TargetSet(act, pts))
        sizes[i] = s.card
        if best is None or s.card > best.card:
            best, best_pts = s, pts
    mean = float(sizes.mean())
    stderr = float(sizes.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    sizes.flags.writeable = False
    return AvoidingSample(best, best_pts, mean, stderr, sizes, k, trials, seed)


def kedlaya_exact_mean(act: PermAction, k: int) -> Fraction:
    """Mean target-avoiding set size over every k-subset of 1..m-1 (exhaustive)."""
    from itertools import combinations

    total, count = 0, 0
    for pts in combinations(range(1, act.m), k):
        total += kedlaya_set(act, TargetSet(act, pts)).card
        count += 1
    return Fraction(total, count)


def triple_construction(act: PermAction, u: TargetSet, v: TargetSet) -> TripleFamily:
    """A = {g : g(U) misses V}, B = {g : g(0) in U}, C = {g : g(0) in V}.

    No ab lands in C since ``(ab)(0) = a(b(0))`` lies in a(U).
    """
    _transitive(act)
    if u.k == 0 or v.k == 0:
        raise GroupError("U and V must be nonempty")
    g = act.group
    in_u, in_v = u.mask(), v.mask()
    a_bits = ~in_v[act.act[:, list(u.points)]].any(axis=1)
    return TripleFamily(
        GroupSubset(g, a_bits),
        GroupSubset(g, in_u[act.act[:, 0]]),
        GroupSubset(g, in_v[act.act[:, 0]]),
    )


def triple_transform(t: TripleFamily, variant: str) -> TripleFamily:
    """``inverse-swap`` gives (B^-1, A^-1, C^-1); ``rotate`` gives (C, B^-1, A)."""
    if variant == "inverse-swap":
        return TripleFamily(set_inverse(t.B), set_inverse(t.A), set_inverse(t.C))
    if variant == "rotate":
        return TripleFamily(t.C, set_inverse(t.B), t.A)
    raise ValueError(f"unknown variant {variant!r}")


def _falling(x: int, i: int) -> int:
    out = 1
    for j in range(i):
        out *= x - j
    return out


def avg_A_lower_bound(m: int, u: int, v: int, h: int, n: int = 1) -> Fraction:
    """Truncated inclusion-exclusion lower bound on the mean of #A.

    ``sum_{i<2h} (-1)^i n (u)_i (v)_i / (i! (m)_i)`` with falling factorials.
    """
    if h < 1:
        raise ValueError("h must be at least 1")
    if min(u, v) < 2 * h - 1:
        raise ValueError("need 2h - 1 <= min(u, v)")
    if 2 * h - 1 > m or u > m or v > m:
        raise ValueError("u, v and 2h - 1 must not exceed m")
    total = Fraction(0)
    for i in range(2 * h):
        term = Fraction(_falling(u, i) * _falling(v, i), math.factorial(i) * _falling(m, i))
        total += -term if i % 2 else term
    return n * total


def union_bound_product(n: int, m: int, u: int, v: int) -> Fraction:
    """``(n^3/m)(uv/m)(1 - uv/m)``, the guaranteed size of #A #B #C."""
    x = Fraction(u * v, m)
    return Fraction(n**3, m) * x * (1 - x)

