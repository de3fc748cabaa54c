"""Singular values of bipartite Cayley graphs and the Gowers bounds.

The incidence matrix ``N`` has rows indexed by the right-hand copy of G and
columns by the left-hand copy, with ``N[y, x] = 1`` iff ``y x^-1`` is in A.
So ``(N v)(y) = sum_{a in A} v(a^-1 y)`` counts the ways of writing y = ab
with b weighted by v.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groups import Group, GroupError, GroupSubset, set_product

POWER_MAX_ITER = 100_000
POWER_TOL = 1e-10
BOUND_SLACK = 1e-6


class SpectrumError(RuntimeError):
    def __init__(self, msg: str, partial: np.ndarray | None = None):
        super().__init__(msg)
        self.partial = partial


@dataclass(frozen=True, eq=False)
class IncidenceMatrix:
    entries: np.ndarray
    generating_set: GroupSubset

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    def is_biregular(self) -> bool:
        d = self.generating_set.card
        return bool(np.all(self.entries.sum(axis=0) == d) and np.all(self.entries.sum(axis=1) == d))


@dataclass(frozen=True, eq=False)
class SingularSpectrum:
    sigma: np.ndarray
    method: str
    residual: float
    iterations: int = 0

    @property
    def sigma1(self) -> float:
        return float(self.sigma[0])

    @property
    def sigma2(self) -> float:
        return float(self.sigma[1]) if self.sigma.size > 1 else 0.0


def cayley_incidence(g: Group, a: GroupSubset) -> IncidenceMatrix:
    if a.group is not g:
        raise GroupError("subset belongs to a different group")
    if a.card == 0:
        raise GroupError("the generating set must be nonempty")
    # entries[y, x] = [y * x^-1 in A]
    entries = a.bits[g.mul[:, g.inv]].astype(np.float64)
    entries.flags.writeable = False
    return IncidenceMatrix(entries, a)


def _dense(nmat: IncidenceMatrix, top_k: int | None) -> SingularSpectrum:
    # SVD of N itself; going through N N^T would square the condition number
    # and leave noise of order sqrt(eps) * sigma_1 in the small values
    u, sigma, vt = np.linalg.svd(nmat.entries)
    residual = float(np.max(np.abs(nmat.entries.T @ u - vt.T * sigma))) if sigma.size else 0.0
    if top_k is not None:
        sigma = sigma[:top_k]
    return SingularSpectrum(sigma, "dense-svd", residual)


def _power(nmat: IncidenceMatrix, top_k: int, block: int, seed: int) -> SingularSpectrum:
    """Top one or two singular values by block power iteration.

    The leading singular vector is the all-ones vector, so sigma_1 comes
    from ``N 1`` and sigma_2 is the top of the spectrum on the complement
    of 1, found by subspace iteration with Rayleigh-Ritz on ``N N^T``.
    """
    n_ = nmat.entries
    n = nmat.n
    ones = np.full(n, 1.0 / np.sqrt(n))
    sigma1 = float(np.linalg.norm(n_ @ ones))
    res1 = float(np.linalg.norm(n_.T @ (n_ @ ones) - sigma1**2 * ones))
    if top_k == 1 or n == 1:
        return SingularSpectrum(np.array([sigma1]), "power", res1 / max(sigma1, 1.0))
    b = max(1, min(block, n - 1))
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, b))
    x -= np.outer(ones, ones @ x)
    x, _ = np.linalg.qr(x)
    scale = max(sigma1**2, 1.0)
    theta = 0.0
    for it in range(1, POWER_MAX_ITER + 1):
        y = n_ @ (n_.T @ x)
        y -= np.outer(ones, ones @ y)
        t = x.T @ y
        vals, vecs = np.linalg.eigh((t + t.T) / 2)
        theta = float(vals[-1])
        ritz = x @ vecs[:, -1]
        resid = float(np.linalg.norm(y @ vecs[:, -1] - theta * ritz))
        if resid <= POWER_TOL * scale:
            sigma2 = float(np.sqrt(max(theta, 0.0)))
            return SingularSpectrum(
                np.array([sigma1, sigma2]), "power", max(res1, resid) / scale, it
            )
        x, _ = np.linalg.qr(y @ vecs[:, ::-1])
    raise SpectrumError(
        "power iteration did not converge", np.array([sigma1, np.sqrt(max(theta, 0.0))])
    )


def singular_spectrum(
    nmat: IncidenceMatrix, top_k: int | None = None, method: str = "auto", seed: int = 0
) -> SingularSpectrum:
    """Singular values of ``N`` in non-increasing order.

    ``method="auto"`` uses block power iteration when at most two values are
    requested and a dense SVD otherwise.
    """
    if method == "auto":
        method = "power" if top_k is not None and top_k <= 2 else "dense"
    if method == "dense":
        return _dense(nmat, top_k)
    if method == "power":
        if top_k is None or top_k > 2:
            raise ValueError("power iteration only computes the top two values")
        return _power(nmat, top_k, block=16, seed=seed)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class LambdaReport:
    lam: float
    bound: Fraction  # n #A / delta, compared against lam^2
    slack: float
    holds: bool


def gowers_lambda_check(
    g: Group, a: GroupSubset, delta: int, spectrum: SingularSpectrum | None = None
) -> LambdaReport:
    """Check ``sigma_2(N)^2 <= n #A / delta``."""
    if delta < 1:
        raise ValueError("delta must be positive")
    if spectrum is None:
        spectrum = singular_spectrum(cayley_incidence(g, a), top_k=2)
    lam = spectrum.sigma2
    bound = Fraction(g.n * a.card, delta)
    slack = float(bound) - lam * lam
    holds = lam * lam <= float(bound) * (1 + BOUND_SLACK)
    return LambdaReport(lam, bound, slack, holds)


def gowers_triple_bound(n: int, delta: int) -> tuple[Fraction, float]:
    """``(n^3 / delta, n / delta^(1/3))``."""
    if delta < 1:
        raise ValueError("delta must be positive")
    return Fraction(n**3, delta), n / delta ** (1.0 / 3.0)


def alpha_within_gowers(size: int, n: int, delta: int) -> bool:
    """Exact test of ``size <= n / delta^(1/3)``."""
    return size**3 * delta <= n**3


@dataclass(frozen=True)
class TripleReport:
    hypothesis: bool  # no ab = c with a in A, b in B, c in C
    product: int
    bound: Fraction
    densities: tuple[Fraction, Fraction, Fraction]
    rst_delta: Fraction
    holds: bool | None  # None when the hypothesis fails


def gowers_verify_triple(
    g: Group, a: GroupSubset, b: GroupSubset, c: GroupSubset, delta: int
) -> TripleReport:
    n = g.n
    hyp = not bool((set_product(a, b) & c).card)
    product = a.card * b.card * c.card
    r, s, t = (Fraction(x.card, n) for x in (a, b, c))
    holds = product * delta <= n**3 if hyp else None
    return TripleReport(hyp, product, Fraction(n**3, delta), (r, s, t), r * s * t * delta, holds)


@dataclass(frozen=True)
class NikolovPyberReport:
    product: int
    bound: Fraction
    applicable: bool  # product exceeds n^3 / delta
    abc_is_group: bool | None
    holds: bool


def nikolov_pyber_check(
    g: Group, a: GroupSubset, b: GroupSubset, c: GroupSubset, delta: int
) -> NikolovPyberReport:
    """When ``#A #B #C > n^3/delta``, confirm that ABC is all of G."""
    n = g.n
    product = a.card * b.card * c.card
    applicable = product * delta > n**3
    covered = None
    if applicable:
        covered = set_product(set_product(a, b), c).card == n
    return NikolovPyberReport(
        product, Fraction(n**3, delta), applicable, covered, bool(covered) or not applicable
    )
