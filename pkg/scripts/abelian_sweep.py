"""Exact alpha of every abelian group of order 2..N against the abelian formula.

    python scripts/abelian_sweep.py --nmax 48
"""

import argparse
import time
from fractions import Fraction

from profree.groups import abelian_groups_of_order, build_abelian
from profree.productfree import alpha_exact, green_ruzsa_alpha


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--nmax", type=int, default=48)
    p.add_argument("--budget", type=float, default=60.0, help="seconds per group")
    args = p.parse_args()

    lowest = None
    mismatches = 0
    for n in range(2, args.nmax + 1):
        for fac in abelian_groups_of_order(n):
            start = time.perf_counter()
            res = alpha_exact(build_abelian(fac), args.budget)
            ms = (time.perf_counter() - start) * 1000
            formula = green_ruzsa_alpha(fac)
            flag = "" if res.alpha == formula else "  MISMATCH"
            mismatches += res.alpha != formula
            beta = Fraction(res.alpha, n)
            if lowest is None or beta < lowest[0]:
                lowest = (beta, fac)
            exact = "" if res.exact else " (budget hit)"
            print(f"{'x'.join(map(str, fac)):>12}  alpha={res.alpha:>3} formula={formula:>3} beta={str(beta):>6} {ms:8.1f}ms{exact}{flag}")
    print(f"lowest beta {lowest[0]} at Z{'xZ'.join(map(str, lowest[1]))}; mismatches: {mismatches}")


if __name__ == "__main__":
    main()
