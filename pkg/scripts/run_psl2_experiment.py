"""Sweep PSL2(q) and print measured constants next to the bounds.

    python scripts/run_psl2_experiment.py --qmax 19 --seed 1 --out results/psl2

The constant c in alpha >= c n / m^(1/2) is not pinned down by the theory,
so the script reports the measured ratio for each q instead.
"""

import argparse
import math

from profree.experiment import SUPPORTED_Q, run_experiment_psl2


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--qmax", type=int, default=19)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write <out>.csv and <out>.json")
    args = p.parse_args()

    rows = run_experiment_psl2([q for q in SUPPORTED_Q if q <= args.qmax], args.trials, args.seed, args.out)
    header = f"{'q':>3} {'n':>5} {'m':>3} {'delta':>5} {'BS':>4} {'Avoid':>5} {'upper':>8} {'c_avoid':>7} {'c_triple':>8} {'ms':>6}"
    print(header)
    for r in rows:
        c_avoid = r.alpha_lower_kedlaya_best / (r.n / math.sqrt(r.m))
        c_triple = r.triple_product_lower / (r.n**3 / r.m)
        print(
            f"{r.q:>3} {r.n:>5} {r.m:>3} {r.delta:>5} {r.alpha_lower_babai_sos:>4} "
            f"{r.alpha_lower_kedlaya_best:>5} {r.gowers_alpha_upper:>8.1f} {c_avoid:>7.3f} "
            f"{c_triple:>8.3f} {r.runtime_ms:>6}"
        )


if __name__ == "__main__":
    main()
