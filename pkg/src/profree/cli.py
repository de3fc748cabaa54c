"""``profree`` command line: one JSON document per call on stdout.

Exit status is 0 on success, 1 when a verification step finds a violated
invariant and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import chartable, constructions as cons, productfree as pf, spectral as sp
from .experiment import SUPPORTED_Q, InvariantViolation, run_experiment_psl2
from .groups import (
    GroupError,
    GroupSubset,
    PermAction,
    abelian_invariants,
    min_proper_subgroup_index,
    regular_action,
)
from .groupspec import GroupSpecError, cache_dir, parse_groupspec
from .report import report

log = logging.getLogger("profree")


class UsageError(Exception):
    pass


def parse_duration(text: str) -> float:
    mt = re.fullmatch(r"\s*(\d+(?:\.\d+)?)\s*(ms|s|m|h)?\s*", text)
    if not mt:
        raise argparse.ArgumentTypeError(f"bad duration {text!r}")
    scale = {"ms": 1e-3, "s": 1, "m": 60, "h": 3600, None: 1}[mt.group(2)]
    return float(mt.group(1)) * scale


def _emit(payload) -> None:
    sys.stdout.buffer.write(report("json", payload))
    sys.stdout.flush()


def _load(args):
    cache = None if args.no_cache else cache_dir()
    try:
        return parse_groupspec(args.group, cache)
    except (GroupSpecError, GroupError) as exc:
        raise UsageError(str(exc)) from exc


def _rebase(act: PermAction, base: int) -> PermAction:
    """Relabel points by swapping 0 and ``base`` so that ``base`` acts as point 0."""
    if base == 0:
        return act
    if not 0 <= base < act.m:
        raise UsageError(f"base point must lie in 0..{act.m - 1}")
    perm = np.arange(act.m)
    perm[[0, base]] = [base, 0]
    return PermAction(act.group, perm[act.act[:, perm]])


def _action(g, act, base: int = 0) -> PermAction:
    act = act if act is not None else regular_action(g)
    if not act.is_transitive or act.m < 2:
        raise UsageError("this group has no transitive action on two or more points")
    return _rebase(act, base)


def _delta(g, given: int | None) -> int:
    if given is not None:
        return given
    d = chartable.character_degrees(g).delta
    if d is None:
        raise UsageError("the trivial group has no nontrivial representation")
    return d


# -- subcommands --------------------------------------------------------------


def cmd_group(args) -> int:
    g, act = _load(args)
    try:
        min_index = min_proper_subgroup_index(g) if g.n > 1 else None
    except GroupError:
        min_index = None
    _emit({
        "spec": args.group,
        "label": g.label,
        "n": g.n,
        "abelian": g.is_abelian,
        "invariant_factors": list(abelian_invariants(g)) if g.is_abelian else None,
        "exponent": g.exponent(),
        "action_degree": act.m if act is not None else None,
        "transitive": act.is_transitive if act is not None else None,
        "min_proper_index": min_index,
    })
    return 0


def cmd_alpha(args) -> int:
    g, _ = _load(args)
    res = pf.alpha_exact(g, args.budget)
    ok = pf.is_product_free(res.witness)
    out = {
        "n": g.n,
        "alpha": res.alpha,
        "beta": res.beta,
        "beta_exact": str(res.beta),
        "exact": res.exact,
        "nodes": res.nodes,
        "witness": res.witness.tolist(),
    }
    if args.formula:
        if not g.is_abelian:
            raise UsageError("--formula needs an abelian group")
        factors = abelian_invariants(g)
        formula = pf.green_ruzsa_alpha(factors)
        out["invariant_factors"] = list(factors)
        out["formula_alpha"] = formula
        if res.exact and formula != res.alpha:
            ok = False
    out["verified"] = ok
    _emit(out)
    return 0 if ok else 1


def cmd_chartable(args) -> int:
    g, _ = _load(args)
    cd = chartable.character_degrees(g)
    ok = sum(d * d for d in cd.degrees) == g.n
    _emit({"classes": cd.classes, "degrees": list(cd.degrees), "delta": cd.delta, "prime": cd.prime})
    return 0 if ok else 1


def cmd_construct(args) -> int:
    g, act = _load(args)
    act = _action(g, act, args.base)
    n, m = g.n, act.m
    out: dict = {"construction": args.kind, "group": args.group, "n": n, "m": m, "base": args.base}
    ok = True
    if args.kind == "babai-sos":
        target = 1 if args.target is None else args.target
        s = cons.babai_sos(act, 0, target)
        ok = pf.is_product_free(s) and s.card * m == n
        out.update(size=s.card, expected_size=n // m, product_free=pf.is_product_free(s),
                   witness=s.tolist())
    elif args.kind == "kedlaya":
        k = cons.default_k(m) if args.k is None else args.k
        res = cons.kedlaya_randomized(act, k, args.trials, args.seed)
        free = pf.is_product_free(res.best)
        ok = free
        out.update(k=k, trials=res.trials, seed=res.seed, mean=res.mean, stderr=res.stderr,
                   average_bound=cons.kedlaya_bound(n, m, k), best_size=res.best.card,
                   best_points=list(res.best_points), product_free=free,
                   witness=res.best.tolist())
    else:
        u = max(1, math.isqrt(m // 2)) if args.u is None else args.u
        v = u if args.v is None else args.v
        if not (1 <= u <= m and 1 <= v <= m):
            raise UsageError(f"--u and --v must lie in 1..{m}")
        fam = cons.triple_construction(act, cons.TargetSet(act, range(u)),
                                       cons.TargetSet(act, range(v)))
        variants = {}
        for name in ("inverse-swap", "rotate"):
            t = cons.triple_transform(fam, name)
            variants[name] = {"solutions": t.solutions, "product": t.product}
            ok = ok and t.solutions == 0 and t.product == fam.product
        ok = ok and fam.solutions == 0 and fam.B.card * m == u * n and fam.C.card * m == v * n
        out.update(u=u, v=v, sizes=[fam.A.card, fam.B.card, fam.C.card],
                   solutions=fam.solutions, product=fam.product,
                   union_bound=cons.union_bound_product(n, m, u, v), variants=variants,
                   A=fam.A.tolist(), B=fam.B.tolist(), C=fam.C.tolist())
    out["seed"] = args.seed
    out["verified"] = ok
    _emit(out)
    return 0 if ok else 1


def _subset_for_spectrum(args, g, act) -> GroupSubset:
    choice = args.set
    path = Path(choice)
    if path.exists():
        doc = json.loads(path.read_text())
        elems = doc["witness"] if isinstance(doc, dict) else doc
        return GroupSubset.from_elements(g, elems)
    if choice == "babai-sos":
        return cons.babai_sos(_action(g, act), 0, 1)
    if choice == "kedlaya":
        return cons.kedlaya_randomized(_action(g, act), None, args.trials, args.seed).best
    mt = re.fullmatch(r"random:(\d+)", choice)
    if mt:
        size = int(mt.group(1))
        if not 1 <= size <= g.n:
            raise UsageError(f"random set size must lie in 1..{g.n}")
        rng = np.random.default_rng(args.seed)
        return GroupSubset.from_elements(g, rng.choice(g.n, size, replace=False))
    raise UsageError(f"--set must be a witness file, babai-sos, kedlaya or random:SIZE, not {choice!r}")


def cmd_spectrum(args) -> int:
    g, act = _load(args)
    a = _subset_for_spectrum(args, g, act)
    if a.card == 0:
        raise UsageError("the set is empty")
    delta = _delta(g, args.delta)
    top = None if args.top == "all" else int(args.top)
    nmat = sp.cayley_incidence(g, a)
    spec = sp.singular_spectrum(nmat, top_k=top, seed=args.seed)
    lam = sp.gowers_lambda_check(g, a, delta, spec)
    trace_check = None
    if top is None:
        total = float(np.sum(spec.sigma**2))
        trace_check = abs(total - g.n * a.card) <= 1e-6 * g.n * a.card
    ok = lam.holds and trace_check is not False and abs(spec.sigma1 - a.card) <= 1e-9 * g.n
    _emit({
        "n": g.n,
        "set_size": a.card,
        "delta": delta,
        "method": spec.method,
        "sigma1": spec.sigma1,
        "sigma2": spec.sigma2,
        "trace_check": trace_check,
        "gowers_bound": lam.bound,
        "slack": lam.slack,
        "holds": lam.holds,
        "residual": spec.residual,
        "seed": args.seed,
    })
    return 0 if ok else 1


def cmd_bound(args) -> int:
    g, act = _load(args)
    delta = _delta(g, args.delta)
    triple, alpha_upper = sp.gowers_triple_bound(g.n, delta)
    out = {"n": g.n, "delta": delta, "triple_bound": triple, "alpha_upper": alpha_upper}
    if act is not None and act.is_transitive and act.m > 1:
        m = act.m
        k = cons.default_k(m)
        out.update(m=m, babai_sos_lower=g.n // m, avoiding_k=k,
                   avoiding_average_bound=cons.kedlaya_bound(g.n, m, k) if m > 2 else None)
    _emit(out)
    return 0


def cmd_experiment(args) -> int:
    if args.qs:
        qs = [int(x) for x in args.qs.split(",") if x.strip()]
    else:
        qs = [q for q in SUPPORTED_Q if q <= args.qmax]
    try:
        rows = run_experiment_psl2(qs, args.trials, args.seed, args.out, timing=not args.no_timing)
    except InvariantViolation as exc:
        log.error("%s", exc)
        return 1
    _emit({"family": "psl2", "seed": args.seed, "trials": args.trials, "rows": rows})
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="profree", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_group(name, **kw):
        sp_ = sub.add_parser(name, **kw)
        sp_.add_argument("group", help="group spec, e.g. Z2xZ4, S3, PSL2(7)")
        sp_.add_argument("--no-cache", action="store_true", help="do not use the table cache")
        return sp_

    with_group("group", help="describe a group")

    a = with_group("alpha", help="exact maximum product-free set")
    a.add_argument("--budget", type=parse_duration, default=60.0)
    a.add_argument("--formula", action="store_true", help="also evaluate the abelian formula")

    with_group("chartable", help="character degrees and delta")

    c = sub.add_parser("construct", help="lower-bound constructions")
    c.add_argument("kind", choices=["babai-sos", "kedlaya", "triple"])
    c.add_argument("group")
    c.add_argument("--no-cache", action="store_true")
    c.add_argument("--k", type=int)
    c.add_argument("--trials", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--u", type=int)
    c.add_argument("--v", type=int)
    c.add_argument("--base", type=int, default=0, help="base point (default 0)")
    c.add_argument("--target", type=int, help="image of the base point for babai-sos")

    s = with_group("spectrum", help="singular values and the Gowers lambda bound")
    s.add_argument("--set", required=True,
                   help="witness JSON file, babai-sos, kedlaya or random:SIZE")
    s.add_argument("--top", default="all", choices=["1", "2", "all"])
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--delta", type=int)

    b = with_group("bound", help="Gowers upper bounds and construction lower bounds")
    b.add_argument("--delta", type=int)

    e = sub.add_parser("experiment", help="PSL2(q) sweep")
    e.add_argument("family", choices=["psl2"])
    e.add_argument("--qmax", type=int, default=19)
    e.add_argument("--qs", help="comma separated q values (overrides --qmax)")
    e.add_argument("--trials", type=int, default=1000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out", help="write <out>.csv and <out>.json")
    e.add_argument("--no-timing", action="store_true", help="report runtime_ms as 0")
    return p


COMMANDS = {
    "group": cmd_group,
    "alpha": cmd_alpha,
    "chartable": cmd_chartable,
    "construct": cmd_construct,
    "spectrum": cmd_spectrum,
    "bound": cmd_bound,
    "experiment": cmd_experiment,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"profree: error: {exc}", file=sys.stderr)
        return 2
    except GroupError as exc:
        print(f"profree: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
