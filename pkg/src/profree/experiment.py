"""Lower versus upper bounds on product-free sets in PSL2(q)."""

from __future__ import annotations

import dataclasses
import logging
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .chartable import character_degrees
from .constructions import TargetSet, babai_sos, kedlaya_randomized, triple_construction
from .groups import build_psl2
from .productfree import is_product_free
from .report import report
from .spectral import alpha_within_gowers, gowers_triple_bound

log = logging.getLogger(__name__)

SUPPORTED_Q = (5, 7, 11, 13, 17, 19)


@dataclass
class ExperimentRow:
    q: int
    n: int
    m: int
    delta: int
    alpha_lower_babai_sos: int
    alpha_lower_kedlaya_best: int
    alpha_lower_kedlaya_mean: float
    gowers_alpha_upper: float
    triple_product_lower: int
    triple_product_upper: int
    seed: int
    runtime_ms: int


FIELDS = [f.name for f in dataclasses.fields(ExperimentRow)]


class InvariantViolation(RuntimeError):
    pass


def psl2_row(q: int, trials: int = 1000, seed: int = 0, timing: bool = True) -> ExperimentRow:
    start = time.perf_counter()
    g, act = build_psl2(q)
    n, m = g.n, act.m
    delta = character_degrees(g).delta
    coset = babai_sos(act, 0, 1)
    sample = kedlaya_randomized(act, None, trials, seed)
    u = max(1, math.isqrt(m // 2))
    pts = TargetSet(act, tuple(range(u)))
    fam = triple_construction(act, pts, pts)
    triple_upper, alpha_upper = gowers_triple_bound(n, delta)

    for name, s in (("babai-sos", coset), ("kedlaya", sample.best)):
        if not is_product_free(s):
            raise InvariantViolation(f"{name} witness for q={q} is not product-free")
        if not alpha_within_gowers(s.card, n, delta):
            raise InvariantViolation(f"{name} witness for q={q} beats the Gowers bound")
    if fam.solutions:
        raise InvariantViolation(f"triple construction for q={q} has solutions")
    if fam.product * delta > n**3:
        raise InvariantViolation(f"triple product for q={q} exceeds n^3/delta")

    elapsed = round((time.perf_counter() - start) * 1000) if timing else 0
    return ExperimentRow(
        q=q,
        n=n,
        m=m,
        delta=delta,
        alpha_lower_babai_sos=coset.card,
        alpha_lower_kedlaya_best=sample.best.card,
        alpha_lower_kedlaya_mean=sample.mean,
        gowers_alpha_upper=alpha_upper,
        triple_product_lower=fam.product,
        triple_product_upper=int(triple_upper),
        seed=seed,
        runtime_ms=elapsed,
    )


def run_experiment_psl2(
    q_list: Iterable[int],
    trials: int = 1000,
    seed: int = 0,
    out_path: Path | str | None = None,
    timing: bool = True,
) -> list[ExperimentRow]:
    """One row per supported q, in increasing q; writes ``.csv`` and ``.json`` if asked."""
    qs = []
    for q in sorted(set(int(x) for x in q_list)):
        if q in SUPPORTED_Q:
            qs.append(q)
        else:
            log.warning("skipping unsupported q=%d (supported: %s)", q, SUPPORTED_Q)
    rows = [psl2_row(q, trials, seed, timing) for q in qs]
    if out_path is not None:
        out = Path(out_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.with_suffix(".csv").write_bytes(report("csv", rows, FIELDS))
        out.with_suffix(".json").write_bytes(report("json", {"rows": rows}))
    return rows
