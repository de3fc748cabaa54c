"""Finite groups as dense Cayley tables.

Elements are the integers ``0..n-1`` and element 0 is always the identity.
Permutation groups carry a :class:`PermAction`, a left action where the
product ``g*h`` acts as "``h`` first, then ``g``".
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 4096
ASSOC_EXHAUSTIVE_LIMIT = 512
ASSOC_SAMPLES = 1_000_000
SUBGROUP_ENUM_CAP = 400


class GroupError(ValueError):
    pass


class OrderCapError(GroupError):
    pass


class NotSubgroupError(GroupError):
    pass


class NotNormalError(GroupError):
    pass


def _frozen(arr) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.int32)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class Group:
    mul: np.ndarray
    inv: np.ndarray
    label: str = ""
    # ("psl2", q), ("abelian", factors), ... ; used for short cuts like the
    # known minimal index of PSL2(q)
    family: tuple = ()

    @property
    def n(self) -> int:
        return int(self.mul.shape[0])

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Group({self.label or '?'}, n={self.n})"

    @classmethod
    def from_table(cls, mul, label: str = "", family: tuple = ()) -> "Group":
        mul = np.asarray(mul)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        n = mul.shape[0]
        if n > MAX_ORDER:
            raise OrderCapError(f"order {n} exceeds the maximum {MAX_ORDER}")
        rows, cols = np.nonzero(mul == 0)
        if len(rows) != n or len(set(rows.tolist())) != n:
            raise GroupError("every element needs exactly one right inverse")
        inv = np.empty(n, dtype=np.int32)
        inv[rows] = cols
        return cls(_frozen(mul), _frozen(inv), label, tuple(family))

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def element_orders(self) -> np.ndarray:
        n = self.n
        orders = np.zeros(n, dtype=np.int64)
        elems = np.arange(n)
        power = elems.copy()
        for t in range(1, n + 1):
            hit = (power == 0) & (orders == 0)
            orders[hit] = t
            if orders.all():
                break
            power = self.mul[power, elems]
        return orders

    def exponent(self) -> int:
        return reduce(math.lcm, self.element_orders().tolist(), 1)

    def validate(self, rng_seed: int = 0) -> None:
        """Check the Cayley table axioms, raising :class:`GroupError` on failure.

        Associativity is checked on every triple up to
        ``ASSOC_EXHAUSTIVE_LIMIT`` elements and on ``ASSOC_SAMPLES`` random
        triples above that.
        """
        mul, inv, n = self.mul, self.inv, self.n
        ar = np.arange(n)
        if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
            raise GroupError("element 0 is not a two-sided identity")
        if (mul.min() < 0) or (mul.max() >= n):
            raise GroupError("table entries out of range")
        if not (np.all(mul[ar, inv] == 0) and np.all(mul[inv, ar] == 0)):
            raise GroupError("inverse table is wrong")
        srt = np.sort(mul, axis=1)
        if not np.all(srt == ar):
            raise GroupError("a row of the table is not a permutation")
        srt = np.sort(mul, axis=0)
        if not np.all(srt == ar[:, None]):
            raise GroupError("a column of the table is not a permutation")
        if n <= ASSOC_EXHAUSTIVE_LIMIT:
            for a in range(n):
                # (ab)c versus a(bc) for all b, c at once
                if not np.array_equal(mul[mul[a]], mul[a][mul]):
                    raise GroupError(f"associativity fails with a={a}")
        else:
            rng = np.random.default_rng(rng_seed)
            for _ in range(ASSOC_SAMPLES // 100_000):
                a, b, c = rng.integers(0, n, size=(3, 100_000))
                if not np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]]):
                    raise GroupError("associativity fails on a sampled triple")


@dataclass(frozen=True, eq=False)
class PermAction:
    """Left action of ``group`` on the points ``0..m-1``; ``act[g, p]`` is g(p)."""

    group: Group
    act: np.ndarray

    @property
    def m(self) -> int:
        return int(self.act.shape[1])

    def orbit(self, point: int = 0) -> list[int]:
        return sorted(set(self.act[:, point].tolist()))

    @property
    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.m

    def validate(self) -> None:
        g, act = self.group, self.act
        if act.shape[0] != g.n:
            raise GroupError("action table has the wrong number of rows")
        if not np.array_equal(act[0], np.arange(self.m)):
            raise GroupError("identity does not act trivially")
        if not np.all(np.sort(act, axis=1) == np.arange(self.m)):
            raise GroupError("some element does not act as a permutation")
        # act[gh, p] == act[g, act[h, p]] for all g, h, p
        for h in range(g.n):
            if not np.array_equal(act[g.mul[:, h]], act[:, act[h]]):
                raise GroupError(f"action is not a homomorphism at h={h}")


@dataclass(frozen=True, eq=False)
class GroupSubset:
    group: Group
    bits: np.ndarray
    card: int = field(init=False)

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        if bits.shape != (self.group.n,):
            raise GroupError("bitset length must equal the group order")
        bits = bits.copy()
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "card", int(bits.sum()))

    @classmethod
    def from_elements(cls, group: Group, elements: Iterable[int]) -> "GroupSubset":
        bits = np.zeros(group.n, dtype=bool)
        idx = np.fromiter((int(e) for e in elements), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= group.n):
            raise GroupError("element index out of range")
        bits[idx] = True
        return cls(group, bits)

    @classmethod
    def full(cls, group: Group) -> "GroupSubset":
        return cls(group, np.ones(group.n, dtype=bool))

    @classmethod
    def empty(cls, group: Group) -> "GroupSubset":
        return cls(group, np.zeros(group.n, dtype=bool))

    @property
    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def tolist(self) -> list[int]:
        return self.elements.tolist()

    def __len__(self) -> int:
        return self.card

    def __contains__(self, x: int) -> bool:
        return bool(self.bits[x])

    def __iter__(self):
        return iter(self.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupSubset):
            return NotImplemented
        return self.group is other.group and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((id(self.group), self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"GroupSubset({self.tolist()})"

    def _check(self, other: "GroupSubset") -> None:
        if other.group is not self.group:
            raise GroupError("subsets belong to different groups")

    def __and__(self, other: "GroupSubset") -> "GroupSubset":
        self._check(other)
        return GroupSubset(self.group, self.bits & other.bits)

    def __or__(self, other: "GroupSubset") -> "GroupSubset":
        self._check(other)
        return GroupSubset(self.group, self.bits | other.bits)

    def __sub__(self, other: "GroupSubset") -> "GroupSubset":
        self._check(other)
        return GroupSubset(self.group, self.bits & ~other.bits)

    def complement(self) -> "GroupSubset":
        return GroupSubset(self.group, ~self.bits)


def set_product(a: GroupSubset, b: GroupSubset) -> GroupSubset:
    """The product set ``AB = {xy : x in A, y in B}``."""
    a._check(b)
    g = a.group
    bits = np.zeros(g.n, dtype=bool)
    bits[g.mul[np.ix_(a.elements, b.elements)].ravel()] = True
    return GroupSubset(g, bits)


def set_inverse(a: GroupSubset) -> GroupSubset:
    g = a.group
    bits = np.zeros(g.n, dtype=bool)
    bits[g.inv[a.elements]] = True
    return GroupSubset(g, bits)


# -- constructors ------------------------------------------------------------


def _check_order(n: int) -> None:
    if n > MAX_ORDER:
        raise OrderCapError(f"order {n} exceeds the maximum {MAX_ORDER}")


def build_cyclic(n: int) -> Group:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    _check_order(n)
    ar = np.arange(n)
    return Group.from_table((ar[:, None] + ar[None, :]) % n, f"Z{n}", ("abelian", (n,)))


def direct_product(g: Group, h: Group) -> Group:
    """Componentwise product; the pair (a, b) is encoded as ``a*h.n + b``."""
    ng, nh = g.n, h.n
    _check_order(ng * nh)
    mul = (g.mul[:, None, :, None].astype(np.int64) * nh + h.mul[None, :, None, :])
    mul = mul.reshape(ng * nh, ng * nh)
    family: tuple = ()
    if g.family[:1] == ("abelian",) and h.family[:1] == ("abelian",):
        family = ("abelian", g.family[1] + h.family[1])
    return Group.from_table(mul, f"{g.label}x{h.label}", family)


def build_dihedral(order: int) -> Group:
    """Dihedral group of the given (even) order, elements r^i s^j as i + k*j."""
    if order < 2 or order % 2:
        raise GroupError("dihedral group order must be even and positive")
    _check_order(order)
    k = order // 2
    i = np.arange(order) % k
    j = np.arange(order) // k
    sign = np.where(j == 1, -1, 1)
    # (r^a s^b)(r^c s^d) = r^(a + (-1)^b c) s^(b+d)
    rot = (i[:, None] + sign[:, None] * i[None, :]) % k
    ref = (j[:, None] + j[None, :]) % 2
    return Group.from_table(rot + k * ref, f"D{order}", ("dihedral", order))


def build_dicyclic(order: int) -> Group:
    """Dicyclic group of order 4k (``Q8`` is the quaternion group).

    Elements a^i x^j are encoded as ``i + 2k*j`` with a of order 2k,
    x^2 = a^k and x a x^-1 = a^-1.
    """
    if order < 4 or order % 4:
        raise GroupError("dicyclic group order must be a positive multiple of 4")
    _check_order(order)
    k2 = order // 2
    i = np.arange(order) % k2
    j = np.arange(order) // k2
    sign = np.where(j == 1, -1, 1)
    rot = i[:, None] + sign[:, None] * i[None, :]
    both = (j[:, None] == 1) & (j[None, :] == 1)
    rot = (rot + np.where(both, k2 // 2, 0)) % k2
    ref = (j[:, None] + j[None, :]) % 2
    return Group.from_table(rot + k2 * ref, f"Q{order}", ("dicyclic", order))


def _perm_lookup(perms: np.ndarray):
    """Return a function mapping arrays of permutation rows to element indices."""
    n, m = perms.shape
    weights = np.random.default_rng(12345).integers(1, 2**62, size=m, dtype=np.uint64)
    keys = (perms.astype(np.uint64) * weights).sum(axis=1)
    order = np.argsort(keys)
    skeys = keys[order]
    if np.any(skeys[1:] == skeys[:-1]):
        raise GroupError("hash collision while indexing permutations")

    def lookup(rows: np.ndarray) -> np.ndarray:
        k = (rows.astype(np.uint64) * weights).sum(axis=-1)
        pos = np.searchsorted(skeys, k)
        pos = np.minimum(pos, n - 1)
        idx = order[pos]
        if not np.array_equal(perms[idx], rows):
            raise GroupError("permutation not in the group (closure error)")
        return idx

    return lookup


def _table_from_perms(perms: np.ndarray) -> np.ndarray:
    n = perms.shape[0]
    lookup = _perm_lookup(perms)
    mul = np.empty((n, n), dtype=np.int32)
    for g in range(n):
        # (g h)(p) = g(h(p))
        mul[g] = lookup(perms[g][perms])
    return mul


def _check_perm(p: Sequence[int], m: int) -> tuple[int, ...]:
    p = tuple(int(x) for x in p)
    if len(p) != m or sorted(p) != list(range(m)):
        raise GroupError(f"not a bijection on {m} points: {p}")
    return p


def build_from_generators(
    perms: Sequence[Sequence[int]],
    m: int | None = None,
    label: str = "",
    family: tuple = (),
    max_order: int = MAX_ORDER,
) -> tuple[Group, PermAction]:
    """Close a set of permutations of ``0..m-1`` under composition.

    Each generator is given in image form, ``p[i]`` being the image of ``i``.
    The result lists elements in breadth-first order from the identity.
    """
    if m is None:
        if not perms:
            raise GroupError("degree m is required when no generators are given")
        m = len(perms[0])
    if m < 1:
        raise GroupError("degree must be positive")
    gens = [_check_perm(p, m) for p in perms]
    ident = tuple(range(m))
    index = {ident: 0}
    elems = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = tuple(s[x[p]] for p in range(m))
            if y not in index:
                if len(elems) >= max_order:
                    raise OrderCapError(f"generated group exceeds order {max_order}")
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    table = np.array(elems, dtype=np.int32)
    group = Group.from_table(_table_from_perms(table), label or f"<{len(gens)} gens on {m}>", family)
    return group, PermAction(group, _frozen(table))


def cycles_to_perm(cycles: Iterable[Sequence[int]], m: int) -> tuple[int, ...]:
    p = list(range(m))
    for cyc in cycles:
        cyc = list(cyc)
        if len(set(cyc)) != len(cyc):
            raise GroupError(f"repeated point in cycle {cyc}")
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if not 0 <= a < m:
                raise GroupError(f"point {a} out of range")
            p[a] = b
    return tuple(p)


def build_symmetric(k: int) -> tuple[Group, PermAction]:
    if k < 1:
        raise GroupError("degree must be positive")
    gens = []
    if k >= 2:
        gens.append(cycles_to_perm([(0, 1)], k))
    if k >= 3:
        gens.append(cycles_to_perm([tuple(range(k))], k))
    return build_from_generators(gens, k, label=f"S{k}")


def build_alternating(k: int) -> tuple[Group, PermAction]:
    if k < 1:
        raise GroupError("degree must be positive")
    gens = [cycles_to_perm([(0, 1, i)], k) for i in range(2, k)]
    return build_from_generators(gens, k, label=f"A{k}")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    r = math.isqrt(p)
    return all(p % d for d in range(3, r + 1, 2))


PSL2_MAX_Q = 19


def build_psl2(q: int) -> tuple[Group, PermAction]:
    """PSL2(q) for an odd prime q acting on the projective line.

    Points ``0..q-1`` are the finite slopes and point ``q`` is infinity.
    """
    if not (is_prime(q) and 5 <= q <= PSL2_MAX_Q):
        raise GroupError(f"PSL2(q) needs an odd prime 5 <= q <= {PSL2_MAX_Q}, got {q}")
    inf = q
    # x -> x + 1
    translate = [(x + 1) % q for x in range(q)] + [inf]
    # x -> -1/x
    invert = [inf] + [(-pow(x, -1, q)) % q for x in range(1, q)] + [0]
    group, action = build_from_generators(
        [translate, invert], q + 1, label=f"PSL2({q})", family=("psl2", q)
    )
    expected = q * (q * q - 1) // 2
    if group.n != expected:
        raise GroupError(f"closure gave order {group.n}, expected {expected}")
    return group, action


# -- subgroups and quotients -------------------------------------------------


def _is_subgroup(g: Group, bits: np.ndarray) -> bool:
    el = np.flatnonzero(bits)
    if not bits[0]:
        return False
    return bool(bits[g.mul[np.ix_(el, el)]].all())


def quotient(g: Group, nsub: GroupSubset) -> tuple[Group, np.ndarray]:
    """Quotient by a normal subgroup; returns ``(G/N, projection)``.

    Cosets are numbered in order of their least element, so the identity
    coset is 0.
    """
    if nsub.group is not g:
        raise GroupError("subset belongs to a different group")
    bits = nsub.bits
    if not _is_subgroup(g, bits):
        raise NotSubgroupError("subset is not a subgroup")
    el = nsub.elements
    for x in range(g.n):
        conj = g.mul[g.mul[x, el], g.inv[x]]
        if not bits[conj].all():
            raise NotNormalError(f"subgroup is not normal (conjugation by {x})")
    proj = np.full(g.n, -1, dtype=np.int64)
    reps = []
    for x in range(g.n):
        if proj[x] < 0:
            proj[g.mul[x, el]] = len(reps)
            reps.append(x)
    reps = np.array(reps)
    qmul = proj[g.mul[np.ix_(reps, reps)]]
    label = f"{g.label}/N{nsub.card}" if g.label else ""
    return Group.from_table(qmul, label), _frozen(proj)


def generated_subgroup(g: Group, gens: Iterable[int]) -> GroupSubset:
    return GroupSubset(g, _closure(g, np.eye(1, g.n, 0, dtype=bool)[0], list(gens)))


def _closure(g: Group, bits: np.ndarray, extra: list[int]) -> np.ndarray:
    bits = bits.copy()
    bits[0] = True
    gens = np.array(sorted(set(np.flatnonzero(bits).tolist()) | set(extra)), dtype=np.int64)
    bits[gens] = True
    frontier = np.flatnonzero(bits)
    while frontier.size:
        new = np.unique(g.mul[np.ix_(frontier, gens)])
        new = new[~bits[new]]
        bits[new] = True
        frontier = new
    return bits


def min_proper_subgroup_index(g: Group, cap: int = SUBGROUP_ENUM_CAP) -> int:
    """Least index of a proper subgroup.

    PSL2(q) groups built by :func:`build_psl2` answer from their family tag:
    q+1 (the projective line), except that PSL2(5), PSL2(7) and PSL2(11)
    also have subgroups of index 5, 7 and 11. Otherwise the subgroup lattice
    is enumerated from cyclic subgroups by repeated joins, which is only
    attempted up to ``cap`` elements.
    """
    if g.family[:1] == ("psl2",):
        q = g.family[1]
        return q if q in (5, 7, 11) else q + 1
    n = g.n
    if n == 1:
        raise GroupError("the trivial group has no proper subgroup")
    if n > cap:
        raise OrderCapError(f"subgroup enumeration capped at order {cap}")
    cyclic = {}
    for x in range(1, n):
        b = _closure(g, np.eye(1, n, 0, dtype=bool)[0], [x])
        cyclic.setdefault(b.tobytes(), (x, b))
    cyc = list(cyclic.values())
    best = n
    for _, b in cyc:
        c = int(b.sum())
        if c < n:
            best = min(best, n // c)
    seen = {k for k in cyclic}
    frontier = [b for _, b in cyc if b.sum() < n]
    while frontier:
        nxt = []
        for h in frontier:
            for x, _ in cyc:
                if h[x]:
                    continue
                j = _closure(g, h, [x])
                key = j.tobytes()
                if key in seen:
                    continue
                seen.add(key)
                c = int(j.sum())
                if c < n:
                    best = min(best, n // c)
                    nxt.append(j)
        frontier = nxt
    return best


def abelian_groups_of_order(n: int) -> list[tuple[int, ...]]:
    """Invariant factor lists ``(d1 | d2 | ...)`` of all abelian groups of order n."""
    if n < 1:
        raise GroupError("order must be positive")

    def partitions(e: int, maxpart: int | None = None):
        if e == 0:
            yield ()
            return
        maxpart = e if maxpart is None else maxpart
        for first in range(min(e, maxpart), 0, -1):
            for rest in partitions(e - first, first):
                yield (first,) + rest

    primes = []
    r, p = n, 2
    while r > 1:
        if r % p == 0:
            e = 0
            while r % p == 0:
                r //= p
                e += 1
            primes.append((p, e))
        p += 1
    result = [()]
    for p, e in primes:
        new = []
        for prev in result:
            for part in partitions(e):
                # largest parts go into the largest invariant factor
                width = max(len(prev), len(part))
                a = (1,) * (width - len(prev)) + tuple(prev)
                b = (1,) * (width - len(part)) + tuple(p**x for x in reversed(part))
                new.append(tuple(x * y for x, y in zip(a, b)))
        result = new
    return sorted(tuple(d for d in fac if d > 1) or (1,) for fac in result)


def build_abelian(factors: Sequence[int]) -> Group:
    if not factors:
        raise GroupError("need at least one cyclic factor")
    g = build_cyclic(factors[0])
    for f in factors[1:]:
        g = direct_product(g, build_cyclic(f))
    return g


def dihedral_action(g: Group) -> PermAction:
    """Action of a group from :func:`build_dihedral` on the k vertices of a k-gon."""
    if g.family[:1] != ("dihedral",):
        raise GroupError("not a dihedral group built by build_dihedral")
    k = g.family[1] // 2
    i = np.arange(g.n) % k
    j = np.arange(g.n) // k
    x = np.arange(k)
    # r^i s^j : x -> i + (-1)^j x
    act = (i[:, None] + np.where(j == 1, -1, 1)[:, None] * x[None, :]) % k
    return PermAction(g, _frozen(act))


def regular_action(g: Group) -> PermAction:
    """Left multiplication of G on its own elements (degree m = n)."""
    return PermAction(g, g.mul)


def abelian_invariants(g: Group) -> tuple[int, ...]:
    """Invariant factors of an abelian group, read off from element orders."""
    if not g.is_abelian:
        raise GroupError("group is not abelian")
    n = g.n
    if n == 1:
        return (1,)
    orders = g.element_orders()
    primes, r, p = [], n, 2
    while r > 1:
        if r % p == 0:
            primes.append(p)
            while r % p == 0:
                r //= p
        p += 1
    factors: list[int] = []
    for p in primes:
        # log_p #{x : x^(p^i) = e} for i = 0, 1, ...
        logs, i = [0], 1
        while True:
            cnt = int(np.sum(p**i % orders == 0))
            e = round(math.log(cnt, p))
            if e == logs[-1]:
                break
            logs.append(e)
            i += 1
        # the number of cyclic p-parts of exponent >= i is logs[i] - logs[i-1]
        at_least = [logs[i] - logs[i - 1] for i in range(1, len(logs))] + [0]
        exps = []
        for i in range(len(at_least) - 1, 0, -1):
            exps += [i] * (at_least[i - 1] - at_least[i])
        width = max(len(factors), len(exps))
        factors = [1] * (width - len(factors)) + factors
        parts = [1] * (width - len(exps)) + [p**e for e in reversed(exps)]
        factors = [a * b for a, b in zip(factors, parts)]
    return tuple(f for f in factors if f > 1)
