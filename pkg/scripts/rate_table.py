#!/usr/bin/env python3
"""Symbolic K against least-squares slopes of ln|f - CF_k| for each bundled spec."""

import argparse

from mcfrac.checks import empirical_order
from mcfrac.engine import rate_of_convergence, run_corrections
from mcfrac.specfile import load_spec

DEFAULT = ("brouncker", "ramanujan", "example1", "gamma3_13", "gamma3_23", "g_eta")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("specs", nargs="*", default=DEFAULT)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--precision", type=int, default=256)
    args = ap.parse_args(argv)
    print(f"{'spec':<10} {'k':>2} {'type':>4} {'K':>4} {'slope':>9} {'ok':>4}")
    for name in args.specs:
        sf = load_spec(name)
        full = run_corrections(sf.spec, args.k)
        for k in range(full.k + 1):
            st = full.truncated(k)
            K = rate_of_convergence(sf.spec, st)
            slope, rep = empirical_order(sf.spec, st, sf.grid, args.precision, K)
            print(f"{name:<10} {k:>2} {st.cf_type or '-':>4} {K!s:>4} {slope:>9.4f} {rep.verdict:>4}")


if __name__ == "__main__":
    main()
