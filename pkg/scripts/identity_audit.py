#!/usr/bin/env python3
"""Run every numeric audit and print the summary tables (or records with --records)."""

import argparse
import json
import sys
import time

from mcfrac.checks import CHECK_NAMES, run_named


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("checks", nargs="*", default=CHECK_NAMES)
    ap.add_argument("--precision", type=int, default=256)
    ap.add_argument("--records", action="store_true")
    args = ap.parse_args(argv)
    failed = []
    for name in args.checks:
        t0 = time.perf_counter()
        rep = run_named(name, precision=args.precision)
        if args.records:
            for rec in rep.to_records():
                print(json.dumps(rec))
        else:
            print(rep.summary_table())
            print(f"  ({time.perf_counter() - t0:.1f}s)\n")
        if not rep.passed:
            failed.append(name)
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
