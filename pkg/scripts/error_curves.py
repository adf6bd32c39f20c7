#!/usr/bin/env python3
"""Error against depth for the four-gamma ladders and the unit-ball ladders, as CSV.

Plotting is left to the reader's tool of choice.
"""

import argparse
import csv
import sys
from fractions import Fraction

import mpmath

from mcfrac import oracle
from mcfrac.checks import entry39_cf, four_gamma_ratio, single_ladder_cf, unit_ball_cf
from mcfrac.contfrac import eval_cf


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-depth", type=int, default=60)
    ap.add_argument("--precision", type=int, default=256)
    args = ap.parse_args(argv)
    prec = args.precision
    w = csv.writer(sys.stdout)
    w.writerow(["family", "params", "depth", "rel_error"])
    with mpmath.workprec(prec + oracle.GUARD_BITS):
        for l, n in ((0, 0), (0, Fraction(1, 2)), (Fraction(1, 4), Fraction(1, 2))):
            for x in (5, 9):
                p = four_gamma_ratio(x, l, n, prec)
                for d in range(1, args.max_depth + 1):
                    for fam, cf in (("refined", single_ladder_cf(l, n)), ("alternating", entry39_cf(l, n))):
                        e = abs(eval_cf(cf, x, d, prec) / p - 1)
                        w.writerow([fam, f"l={l};n={n};x={x}", d, mpmath.nstr(e, 6)])
        for n in (1, 2, 5, 10):
            om = [oracle.unit_ball_volume(k, prec) for k in (n - 1, n, n + 1)]
            target = om[1] ** 2 / (om[0] * om[2])
            for d in range(1, args.max_depth + 1):
                e = abs(eval_cf(unit_ball_cf(n), 0, d, prec) / target - 1)
                w.writerow(["unit-ball", f"n={n}", d, mpmath.nstr(e, 6)])


if __name__ == "__main__":
    main()
