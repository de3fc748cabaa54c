"""Conjugacy classes and irreducible character degrees by Dixon's method.

Only the degrees are computed. The common eigenvectors of the class
multiplication matrices are found exactly over a prime field F_p with
p = 1 mod exp(G) and p > 2 sqrt(n), after which each degree d is the unique
square root of ``n / sum_i w_i w_i* / |C_i|`` below sqrt(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import Group, is_prime

PRIME_SEARCH_LIMIT = 10**8


class CharacterTableError(RuntimeError):
    pass


@dataclass(frozen=True)
class ConjClasses:
    reps: tuple[int, ...]
    sizes: tuple[int, ...]
    class_of: np.ndarray

    def __len__(self) -> int:
        return len(self.reps)


@dataclass(frozen=True)
class CharacterDegrees:
    degrees: tuple[int, ...]
    delta: int | None  # None only for the trivial group
    prime: int

    @property
    def classes(self) -> int:
        return len(self.degrees)


def conjugacy_classes(g: Group) -> ConjClasses:
    n = g.n
    class_of = np.full(n, -1, dtype=np.int64)
    reps, sizes = [], []
    # conj[h, x] = h x h^-1
    conj = g.mul[g.mul, g.inv[:, None]]
    for x in range(n):
        if class_of[x] >= 0:
            continue
        orbit = np.unique(conj[:, x])
        class_of[orbit] = len(reps)
        reps.append(x)
        sizes.append(int(orbit.size))
    class_of.flags.writeable = False
    return ConjClasses(tuple(reps), tuple(sizes), class_of)


def class_coefficients(g: Group, cc: ConjClasses) -> np.ndarray:
    """``a[i, j, l]`` = #{(x, y) in C_i x C_j : xy = z} for a fixed z in C_l."""
    k = len(cc)
    a = np.zeros((k, k, k), dtype=np.int64)
    ci = cc.class_of
    for l, z in enumerate(cc.reps):
        # y = x^-1 z for every x
        cj = cc.class_of[g.mul[g.inv, z]]
        a[:, :, l] = np.bincount(ci * k + cj, minlength=k * k).reshape(k, k)
    return a


def dixon_prime(n: int, exponent: int, limit: int = PRIME_SEARCH_LIMIT) -> int:
    """Smallest prime p = 1 (mod exponent) with p > 2 sqrt(n)."""
    p = exponent + 1
    while p * p <= 4 * n:
        p += exponent
    while p <= limit:
        if is_prime(p):
            return p
        p += exponent
    raise CharacterTableError(f"no prime = 1 mod {exponent} below {limit}")


# -- exact linear algebra over F_p -------------------------------------------


def _matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if p * p * max(a.shape[-1], 1) < 2**62:
        return (a @ b) % p
    return (a.astype(object) @ b.astype(object) % p).astype(np.int64)


def _rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    m = mat.copy() % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        others = np.flatnonzero(m[:, c])
        others = others[others != r]
        if others.size:
            m[others] = (m[others] - np.outer(m[others, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : mat @ x = 0} as rows."""
    red, pivots = _rref(mat, p)
    cols = mat.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for row, c in enumerate(pivots):
            basis[t, c] = (-red[row, f]) % p
    return basis


def _charpoly(a: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial coefficients, leading first (Faddeev-LeVerrier)."""
    d = a.shape[0]
    coeffs = [1]
    mk = np.zeros_like(a)
    ident = np.eye(d, dtype=np.int64)
    for k in range(1, d + 1):
        mk = (_matmul(a, mk, p) + coeffs[-1] * ident) % p
        tr = int(np.trace(_matmul(a, mk, p))) % p
        coeffs.append((-tr * pow(k, -1, p)) % p)
    return coeffs


def _roots(coeffs: list[int], p: int) -> list[int]:
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in coeffs:
        acc = (acc * xs + c) % p
    return np.flatnonzero(acc == 0).tolist()


def _split(basis: np.ndarray, mat: np.ndarray, p: int) -> list[np.ndarray]:
    """Split span(basis) into eigenspaces of ``mat`` (which must preserve it)."""
    basis, pivots = _rref(basis, p)
    d = basis.shape[0]
    # column j holds the coordinates of mat @ b_j in the reduced basis
    images = _matmul(basis, mat.T % p, p)
    restricted = images[:, pivots].T % p
    pieces = []
    total = 0
    # Faddeev-LeVerrier divides by 1..d, so it needs d < p; otherwise every
    # lambda in F_p is tried (and then p <= d is small)
    lams = _roots(_charpoly(restricted, p), p) if d < p else range(p)
    for lam in lams:
        ns = _nullspace((restricted - lam * np.eye(d, dtype=np.int64)) % p, p)
        if ns.shape[0]:
            pieces.append(_matmul(ns, basis, p))
            total += ns.shape[0]
    if total != d:
        raise CharacterTableError(f"class matrix does not diagonalize mod {p}")
    return pieces


def character_degrees(g: Group, cc: ConjClasses | None = None) -> CharacterDegrees:
    cc = cc or conjugacy_classes(g)
    n, k = g.n, len(cc)
    p = dixon_prime(n, g.exponent())
    coef = class_coefficients(g, cc) % p
    spaces = [np.eye(k, dtype=np.int64)]
    # M_i[j, l] = a[i, j, l]; the central characters w satisfy M_i w = w_i w
    for i in range(1, k):
        if all(s.shape[0] == 1 for s in spaces):
            break
        nxt = []
        for s in spaces:
            nxt.extend([s] if s.shape[0] == 1 else _split(s, coef[i], p))
        spaces = nxt
    if len(spaces) != k or any(s.shape[0] != 1 for s in spaces):
        raise CharacterTableError("class matrices did not separate the characters")

    inv_class = np.array([cc.class_of[g.inv[r]] for r in cc.reps])
    inv_sizes = np.array([pow(s, -1, p) for s in cc.sizes], dtype=object)
    root = math.isqrt(n)
    degrees = []
    for s in spaces:
        w = s[0].astype(object)
        if w[0] % p == 0:
            raise CharacterTableError("eigenvector vanishes on the identity class")
        w = w * pow(int(w[0]), -1, p) % p
        norm = int(sum(w * w[inv_class] * inv_sizes)) % p
        if norm == 0:
            raise CharacterTableError("degenerate norm in degree recovery")
        d2 = n * pow(norm, -1, p) % p
        found = [d for d in range(1, root + 1) if d * d % p == d2]
        if len(found) != 1:
            raise CharacterTableError(f"no unique degree for d^2 = {d2} mod {p}")
        degrees.append(found[0])
    degrees.sort()
    nontrivial = degrees[1:]
    return CharacterDegrees(tuple(degrees), min(nontrivial) if nontrivial else None, p)


def delta(g: Group) -> int:
    """Smallest degree of a nontrivial complex irreducible representation."""
    d = character_degrees(g).delta
    if d is None:
        raise CharacterTableError("the trivial group has no nontrivial representation")
    return d
