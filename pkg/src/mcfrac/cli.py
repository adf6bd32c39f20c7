"""Command line front end: ``mcfrac {correct,guess,verify,rate,eval} ...``.

Exit status is 0 on success, 1 when a verification fails and 2 for bad input.
An engine stop is reported as a row and still exits 0.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from . import checks, oracle
from .algebra import format_poly
from .contfrac import SingularEvaluationError, detect_mc_point, to_simplified_form
from .engine import EngineError, SpecError, approx_value, rate_of_convergence, relative_error, run_corrections, theta0
from .guess import guess_layers, verify_guess
from .specfile import SpecLoadError, bundled_names, eval_rational, load_spec

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _q(v) -> str:
    return str(Fraction(v))


class Emitter:
    """Collects human lines or JSON records and writes them in order."""

    def __init__(self, mode: str, out=None):
        self.mode = mode
        self.out = out or sys.stdout

    def line(self, text: str = ""):
        if self.mode == "human":
            print(text, file=self.out)

    def record(self, rec: dict):
        if self.mode == "records":
            print(json.dumps(rec, sort_keys=True), file=self.out)


# --- argument helpers -------------------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return eval_rational(text, {}, "argument")
    except SpecLoadError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _grid(text: str) -> tuple[Fraction, ...]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise argparse.ArgumentTypeError("empty grid")
    return tuple(_rational(p) for p in parts)


def _load(args):
    overrides = {"eta": args.eta} if getattr(args, "eta", None) is not None else None
    try:
        return load_spec(args.spec, overrides)
    except (SpecLoadError, SpecError) as exc:
        raise InputError(str(exc)) from exc


def _k(args, sf) -> int:
    k = sf.k_max if args.k is None else args.k
    if k < 0:
        raise InputError("--k must be non-negative")
    return k


def _precision(args, sf=None) -> int:
    p = args.precision if args.precision is not None else (sf.precision if sf else oracle.DEFAULT_PREC)
    if p < 53:
        raise InputError("--precision must be at least 53 bits")
    return p


# --- subcommands --------------------------------------------------------------------------------


def cmd_correct(args, em: Emitter) -> int:
    sf = _load(args)
    spec = sf.spec
    state = run_corrections(spec, _k(args, sf))
    rates = [rate_of_convergence(spec, state.truncated(j)) for j in range(state.k + 1)]
    em.line(f"{sf.label}: nu = {spec.nu}, c = {spec.c}")
    em.line(f"Phi0 = {format_poly(state.phi0)}    K = {rates[0]}")
    em.record({"kind": "phi0", "spec": sf.label, "nu": spec.nu, "c": _q(spec.c),
               "coeffs": [_q(c) for c in state.phi0.coeffs], "text": format_poly(state.phi0), "K": rates[0]})
    if state.cf_type:
        em.line(f"type {state.cf_type}")
        width = max(len(_q(layer.kappa)) for layer in state.layers)
        em.line(f"{'m':>3}  {'kappa':<{width}}  lambda")
        for m, layer in enumerate(state.layers):
            lam = ", ".join(_q(v) for v in layer.lambdas)
            em.line(f"{m:>3}  {_q(layer.kappa):<{width}}  {lam}    K = {rates[m + 1]}")
            em.record({"kind": "layer", "spec": sf.label, "m": m, "type": layer.cf_type, "kappa": _q(layer.kappa),
                       "lambdas": [_q(v) for v in layer.lambdas], "K": rates[m + 1]})
    mc = detect_mc_point(state)
    if mc is not None:
        simp = to_simplified_form(state, mc)
        em.line(f"MC-point omega = {mc.omega}; in x_hat = x + {mc.omega}: Phi0 = {format_poly(simp.phi0, 'x_hat')}")
        em.record({"kind": "mc_point", "spec": sf.label, "omega": _q(mc.omega),
                   "phi0_hat": [_q(c) for c in simp.phi0.coeffs],
                   "lambdas_hat": [[_q(v) for v in layer.lambdas] for layer in simp.layers]})
    for note in state.notes:
        em.line(f"note: {note}")
    if state.stopped:
        em.line(f"stopped after {state.k} layers: {state.stopped}")
        em.record({"kind": "stop", "spec": sf.label, "layers": state.k, "reason": state.stopped})
    return EXIT_OK


def cmd_guess(args, em: Emitter) -> int:
    sf = _load(args)
    spec = sf.spec
    state = run_corrections(spec, _k(args, sf))
    if state.k == 0:
        em.line(f"{sf.label}: no layers ({state.stopped or 'k = 0'}); nothing to guess")
        em.record({"kind": "stop", "spec": sf.label, "layers": 0, "reason": state.stopped or "k = 0"})
        return EXIT_OK
    # Type-II coefficients read best in x_hat; Type-I ones are kept in x
    simplified = state.cf_type == "II" and detect_mc_point(state) is not None
    sources = ["kappa", "lambda"]
    if state.cf_type == "II" and not simplified:
        sources.append("lambda2")
    em.line(f"{sf.label}: {state.k} layers, type {state.cf_type}" + (", simplified form" if simplified else ""))
    for source in sources:
        try:
            rep = guess_layers(state, source, simplified)
        except ValueError as exc:
            em.line(f"{source}: {exc}")
            em.record({"kind": "guess", "spec": sf.label, "source": source, "form": None, "error": str(exc)})
            continue
        if rep.found:
            rep = verify_guess(spec, state, rep, args.extra)
        tag = f"m >= {rep.start}" if rep.start else "m >= 0"
        if rep.found:
            status = "verified" if rep.verified else "NOT verified"
            em.line(f"{source}_m = {rep.render()}   ({tag}; {rep.method}; {status} through m = {rep.verification_depth})")
        else:
            em.line(f"{source}: no pattern found")
        for note in rep.notes:
            em.line(f"  note: {note}")
        em.record(dict(kind="guess", spec=sf.label, **rep.to_record()))
    return EXIT_OK


def cmd_verify(args, em: Emitter) -> int:
    name = args.check.lower()
    if name not in checks.CHECK_NAMES and name not in ("theorem3", "theorem4", "theorem5"):
        raise InputError(f"unknown check {args.check!r}; known: {', '.join(checks.CHECK_NAMES)}")
    if args.eta is not None and not (0 < args.eta < 1):
        raise InputError("--eta must lie strictly between 0 and 1")
    rep = checks.run_named(name, precision=_precision(args), depth=args.depth, grid=args.grid, eta=args.eta, k=args.k)
    em.line(rep.summary_table())
    for rec in rep.to_records():
        em.record(rec)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_rate(args, em: Emitter) -> int:
    sf = _load(args)
    spec = sf.spec
    prec = _precision(args, sf)
    grid = args.grid or sf.grid
    state = run_corrections(spec, _k(args, sf))
    em.line(f"{sf.label}: empirical order on x in {{{', '.join(str(g) for g in grid)}}}, {prec}-bit")
    em.line(f"{'k':>3}  {'K':>4}  {'slope':>9}  verdict")
    states = [state.truncated(j) for j in range(state.k + 1)]
    ok_all = True
    for j, st in enumerate(states):
        K = rate_of_convergence(spec, st)
        slope, rep = checks.empirical_order(spec, st, grid, prec, K)
        ok_all &= rep.passed
        em.line(f"{j:>3}  {str(K):>4}  {slope:>9.4f}  {rep.verdict}")
        em.record({"kind": "rate", "spec": sf.label, "k": j, "K": K, "slope": repr(slope), "verdict": rep.verdict,
                   "grid": [_q(g) for g in grid], "precision": rep.precision})
    th = theta0(spec, states)
    em.line(f"theta0 = {th}" if th is not None else "theta0 not constant over k")
    em.record({"kind": "theta0", "spec": sf.label, "theta0": th})
    if state.stopped:
        em.line(f"stopped after {state.k} layers: {state.stopped}")
    return EXIT_OK if ok_all else EXIT_FAIL


def cmd_eval(args, em: Emitter) -> int:
    sf = _load(args)
    spec = sf.spec
    prec = _precision(args, sf)
    state = run_corrections(spec, _k(args, sf))
    xs = args.x or args.grid or sf.grid
    digits = max(15, int(prec * 0.30103) - 5)
    em.line(f"{sf.label}, k = {state.k}, {prec}-bit")
    for x in xs:
        if x <= 0:
            raise InputError(f"x = {x} must be positive")
        with mpmath.workprec(prec + oracle.GUARD_BITS):
            f = oracle.eval_f(spec, x, prec)
            try:
                approx = approx_value(spec, state, x, prec)
                err = relative_error(spec, state, x, prec)
            except SingularEvaluationError as exc:
                em.line(f"x = {x}: {exc}")
                em.record({"kind": "eval", "spec": sf.label, "x": _q(x), "error": str(exc)})
                continue
            em.line(f"x = {x}: f = {mpmath.nstr(f, digits)}  CF_{state.k} = {mpmath.nstr(approx, digits)}  "
                    f"E = {mpmath.nstr(err, 6)}")
            em.record({"kind": "eval", "spec": sf.label, "x": _q(x), "k": state.k, "f": mpmath.nstr(f, digits),
                       "cf": mpmath.nstr(approx, digits), "E": mpmath.nstr(err, 10)})
    return EXIT_OK


# --- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mcfrac", description="Exact multiple-correction continued fractions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=None, help="number of correction layers (default: from spec)")
    common.add_argument("--depth", type=int, default=None, help="continued fraction depth for identity checks")
    common.add_argument("--precision", type=int, default=None, help="working precision in bits")
    common.add_argument("--grid", type=_grid, default=None, help="comma-separated rational grid, e.g. 50,100,200")
    common.add_argument("--emit", choices=("human", "records"), default="human")
    common.add_argument("--eta", type=_rational, default=None, help="value of the eta parameter")
    sub = parser.add_subparsers(dest="command", required=True)
    spec_help = f"bundled spec ({', '.join(bundled_names())}) or path to a .spec file"

    p = sub.add_parser("correct", parents=[common], help="solve Phi0 and the correction layers")
    p.add_argument("spec", help=spec_help)
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("guess", parents=[common], help="guess general terms of the layer coefficients")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--extra", type=int, default=2, help="layers solved past the input to verify a guess")
    p.set_defaults(func=cmd_guess)

    p = sub.add_parser("verify", parents=[common], help="run a numeric audit")
    p.add_argument("check", help=", ".join(checks.CHECK_NAMES))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rate", parents=[common], help="symbolic and empirical convergence orders")
    p.add_argument("spec", help=spec_help)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("eval", parents=[common], help="evaluate f and its approximation")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--x", type=_grid, default=None, help="evaluation points (default: --grid or spec grid)")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    em = Emitter(args.emit, out)
    try:
        return args.func(args, em)
    except InputError as exc:
        print(f"mcfrac: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EngineError as exc:
        print(f"mcfrac: engine error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
