#!/usr/bin/env python3
"""Solve the bundled ladders and write their exact coefficients as JSON lines.

    python3 scripts/golden_ladders.py --out ladders.jsonl
"""

import argparse
import json
import sys

from mcfrac.contfrac import detect_mc_point, to_simplified_form
from mcfrac.engine import rate_of_convergence, run_corrections
from mcfrac.specfile import bundled_names, load_spec


def ladder_records(name: str, k: int):
    sf = load_spec(name)
    st = run_corrections(sf.spec, k if k is not None else sf.k_max)
    mc = detect_mc_point(st)
    yield {"spec": name, "kind": "phi0", "coeffs": [str(c) for c in st.phi0.coeffs],
           "type": st.cf_type, "omega": str(mc.omega) if mc else None, "stopped": st.stopped}
    simp = to_simplified_form(st, mc) if mc else None
    for m, layer in enumerate(st.layers):
        yield {
            "spec": name,
            "kind": "layer",
            "m": m,
            "kappa": str(layer.kappa),
            "lambdas": [str(v) for v in layer.lambdas],
            "lambdas_hat": [str(v) for v in simp.layers[m].lambdas] if simp else None,
            "K": rate_of_convergence(sf.spec, st.truncated(m + 1)),
        }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("specs", nargs="*", default=bundled_names())
    ap.add_argument("--k", type=int, default=None)
    ap.add_argument("--out", type=argparse.FileType("w"), default=sys.stdout)
    args = ap.parse_args(argv)
    for name in args.specs:
        for rec in ladder_records(name, args.k):
            args.out.write(json.dumps(rec) + "\n")


if __name__ == "__main__":
    main()
