"""Guessing closed forms for coefficient sequences.

The search clears a candidate denominator, pulls out a rational common factor
and then tries, in order: polynomials (constant right-hand-side difference
equations), perfect powers of such, parity forms in floor(m/2) or (-1)^m, and
quotient/remainder splits modulo a small set of polynomial moduli.  Every fit
is exact interpolation followed by a check against all terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import as_rational
from .closedform import (
    ALT,
    FLOOR_HALF,
    M,
    ClosedForm,
    Const,
    add,
    div,
    from_poly,
    mul,
    poly_through,
    sub,
    power,
)
from .contfrac import CorrectionState, detect_mc_point, to_simplified_form

MAX_DEPTH = 2
MIN_LENGTH = 6


def _lin(q: int, p: int) -> ClosedForm:
    return add(mul(Const(q), M), Const(p))


ODD = _lin(2, 1)  # 2m+1
ODD_NEXT = _lin(2, 3)  # 2m+3
MODULI: tuple[ClosedForm, ...] = (power(ODD, 2), mul(ODD, ODD_NEXT), ODD, ODD_NEXT)
DENOMINATORS: tuple[ClosedForm, ...] = (
    Const(1),
    ODD,
    ODD_NEXT,
    power(ODD, 2),
    mul(ODD, ODD_NEXT),
    add(mul(Const(2), FLOOR_HALF), Const(1)),
)


@dataclass(frozen=True)
class GuessReport:
    """Outcome of a guess.  ``form`` gives the term with index m for m >= start."""

    sequence: tuple[Fraction, ...]
    start: int = 0
    factor: Fraction = Fraction(1)
    denominator: ClosedForm = Const(1)
    form: Optional[ClosedForm] = None
    method: str = "none"
    verification_depth: int = -1
    verified: bool = False
    source: str = ""
    simplified: bool = False
    notes: tuple[str, ...] = ()

    @property
    def found(self) -> bool:
        return self.form is not None

    def render(self) -> str:
        if self.form is None:
            return "no pattern found"
        return self.form.render()

    def to_record(self) -> dict:
        return {
            "source": self.source,
            "start": self.start,
            "sequence": [str(v) for v in self.sequence],
            "factor": str(self.factor),
            "denominator": self.denominator.render(),
            "form": self.render() if self.form is not None else None,
            "method": self.method,
            "verification_depth": self.verification_depth,
            "verified": self.verified,
            "notes": list(self.notes),
        }


# --- building blocks -----------------------------------------------------------


def extract_common_factor(seq: Sequence) -> tuple[Fraction, list[Fraction]]:
    """Split seq = factor * reduced with integer reduced terms of gcd 1, first term positive."""
    vals = [as_rational(v) for v in seq]
    if not vals:
        raise ValueError("empty sequence")
    if any(v == 0 for v in vals):
        raise ValueError("extract_common_factor needs nonzero terms")
    g = 0
    lcm = 1
    for v in vals:
        g = math.gcd(g, v.numerator)
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    factor = Fraction(g, lcm)
    if vals[0] < 0:
        factor = -factor
    return factor, [v / factor for v in vals]


def _binomial_difference(seq: Sequence[Fraction], order: int) -> list[Fraction]:
    return [
        sum((-1) ** j * math.comb(order, j) * seq[i - j] for j in range(order + 1))
        for i in range(order, len(seq))
    ]


def fit_recurrence_const_rhs(seq: Sequence, order: int, start: int = 0) -> Optional[tuple[Fraction, ClosedForm]]:
    """Constant order-r difference, i.e. a polynomial of degree <= r in m."""
    vals = [as_rational(v) for v in seq]
    if len(vals) < order + 3 or order < 1:
        return None
    diffs = _binomial_difference(vals, order)
    if len(set(diffs)) != 1:
        return None
    ms = range(start, start + len(vals))
    poly = poly_through(list(ms)[: order + 1], vals[: order + 1])
    if any(poly(Fraction(m)) != v for m, v in zip(ms, vals)):
        return None  # pragma: no cover - a constant difference forces the fit
    return diffs[0], from_poly(poly)


def _parity_solution(vals, start):
    """A + B m + C floor(m/2) through the first three terms (None if singular)."""
    rows = []
    for i in range(3):
        m = start + i
        rows.append(([Fraction(1), Fraction(m), Fraction(m // 2)], vals[i]))
    # Gaussian elimination on the 3x3 system
    a = [r[0][:] + [r[1]] for r in rows]
    for col in range(3):
        piv = next((r for r in range(col, 3) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        for r in range(3):
            if r != col and a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(a[i][3] / a[i][i] for i in range(3))


def fit_parity_form(seq: Sequence, start: int = 0) -> Optional[ClosedForm]:
    """First differences alternating between two constants.

    The same fit can be written with floor(m/2) or with (1 - (-1)^m)/2; the
    variant with integer, then nonnegative, coefficients wins, floor on ties.
    """
    vals = [as_rational(v) for v in seq]
    if len(vals) < MIN_LENGTH:
        return None
    sol = _parity_solution(vals, start)
    if sol is None:
        return None
    A, B, C = sol
    if any(A + B * m + C * (m // 2) != v for m, v in zip(range(start, start + len(vals)), vals)):
        return None
    if C == 0:
        return from_poly(poly_through([0, 1], [A, A + B]))
    # floor(m/2) = (m - p)/2 with p = (1 - (-1)^m)/2
    floor_coeffs = (A, B, C)
    sign_coeffs = (A, B + C / 2, -C / 2)

    def score(cs):
        return (any(c.denominator != 1 for c in cs), any(c < 0 for c in cs))

    if score(sign_coeffs) < score(floor_coeffs):
        a, b, c = sign_coeffs
        prim = div(sub(Const(1), ALT), Const(2))
    else:
        a, b, c = floor_coeffs
        prim = FLOOR_HALF
    return add(from_poly(poly_through([0, 1], [a, a + b])), mul(Const(c), prim))


def modular_decompose(seq: Sequence, modulus: ClosedForm, start: int = 0) -> tuple[list[int], list[int]]:
    """seq[m] = q[m] * modulus(m) + r[m] with 0 <= r[m] < modulus(m)."""
    qs, rs = [], []
    for i, v in enumerate(seq):
        v = as_rational(v)
        mod = modulus.evaluate(start + i)
        if v.denominator != 1 or mod.denominator != 1:
            raise ValueError(f"modular decomposition needs integers (term {i}: {v}, modulus {mod})")
        if mod <= 0:
            raise ValueError(f"modulus {mod} at m = {start + i} is not positive")
        q, r = divmod(v.numerator, mod.numerator)
        qs.append(q)
        rs.append(r)
    return qs, rs


def _integer_root(n: int, k: int) -> Optional[int]:
    if n < 0:
        if k % 2 == 0:
            return None
        r = _integer_root(-n, k)
        return None if r is None else -r
    r = round(n ** (1.0 / k)) if n < 2**1000 else int(math.isqrt(n)) if k == 2 else None
    if r is None:
        return None
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def _fit_plain(vals: list[Fraction], start: int) -> Optional[tuple[ClosedForm, str]]:
    for order in (1, 2, 3):
        fit = fit_recurrence_const_rhs(vals, order, start)
        if fit is not None:
            return fit[1], f"recurrence(order={order}, rhs={fit[0]})"
    form = fit_parity_form(vals, start)
    if form is not None:
        return form, "parity"
    return None


def _fit_core(vals: list[Fraction], start: int, depth: int, moduli=MODULI) -> Optional[tuple[ClosedForm, str]]:
    if len(vals) < 3:
        return None
    hit = _fit_plain(vals, start)
    if hit is not None:
        return hit
    if all(v.denominator == 1 for v in vals) and len(set(vals)) > 1:
        for k in (3, 2):
            roots = [_integer_root(v.numerator, k) for v in vals]
            if all(r is not None for r in roots):
                inner = _fit_plain([Fraction(r) for r in roots], start)
                if inner is not None:
                    return power(inner[0], k), f"power({k}) of {inner[1]}"
    if depth < MAX_DEPTH and all(v.denominator == 1 and v > 0 for v in vals):
        for mod in moduli:
            qs, rs = modular_decompose(vals, mod, start)
            if not any(qs):
                continue
            fq = _fit_core([Fraction(q) for q in qs], start, depth + 1, moduli)
            if fq is None:
                continue
            if any(rs):
                fr = _fit_core([Fraction(r) for r in rs], start, depth + 1, moduli)
                if fr is None:
                    continue
                return add(mul(fq[0], mod), fr[0]), f"mod {mod.render()}: q by {fq[1]}; r by {fr[1]}"
            return mul(fq[0], mod), f"mod {mod.render()}: q by {fq[1]}"
    return None


def _reproduces(form: ClosedForm, vals: Sequence[Fraction], start: int) -> bool:
    try:
        return all(form.evaluate(start + i) == v for i, v in enumerate(vals))
    except ZeroDivisionError:
        return False


def _guess_from(vals: list[Fraction], start: int, denominators, moduli) -> Optional[GuessReport]:
    if all(v == 0 for v in vals):
        return GuessReport(sequence=tuple(vals), start=start, factor=Fraction(0), form=Const(0), method="zero",
                           verification_depth=start + len(vals) - 1)
    for den in denominators:
        t = [v * den.evaluate(start + i) for i, v in enumerate(vals)]
        if any(x == 0 for x in t):
            continue
        factor, reduced = extract_common_factor(t)
        hit = _fit_core(reduced, start, 0, moduli)
        if hit is None:
            continue
        inner, method = hit
        form = mul(Const(factor), inner)
        if not (isinstance(den, Const) and den.value == 1):
            form = div(form, den)
        if not _reproduces(form, vals, start):  # pragma: no cover - fits are exact
            continue
        return GuessReport(
            sequence=tuple(vals),
            start=start,
            factor=factor,
            denominator=den,
            form=form,
            method=method,
            verification_depth=start + len(vals) - 1,
        )
    return None


def guess_general_term(seq: Sequence, hints: Optional[dict] = None) -> GuessReport:
    """Search for a closed form of seq[m] (m from 0, or from 1 when the first term is exceptional).

    ``hints`` may carry ``denominators`` or ``moduli`` (ClosedForm tuples) to extend
    the fixed repertoire, and ``start`` to force the first index.
    """
    hints = hints or {}
    vals = [as_rational(v) for v in seq]
    if len(vals) < MIN_LENGTH:
        raise ValueError(f"need at least {MIN_LENGTH} terms, got {len(vals)}")
    dens = tuple(hints.get("denominators", ())) + DENOMINATORS
    moduli = tuple(hints.get("moduli", ())) + MODULI
    starts = [hints["start"]] if "start" in hints else [0, 1]
    for st in starts:
        tail = vals[st:]
        if len(tail) < MIN_LENGTH - (1 if st else 0):
            continue
        rep = _guess_from(tail, st, dens, moduli)
        if rep is not None:
            notes = ("first term does not follow the general term",) if st else ()
            return replace(rep, sequence=tuple(vals), notes=notes)
    return GuessReport(sequence=tuple(vals))


# --- verification against the engine ---------------------------------------------


def layer_sequence(state: CorrectionState, source: str = "kappa", simplified: bool = False) -> list[Fraction]:
    """kappa, lambda (first lambda) or lambda2 values, optionally in the simplified form."""
    if simplified:
        mc = detect_mc_point(state)
        if mc is None:
            raise ValueError("no MC-point, so no simplified form")
        state = to_simplified_form(state, mc)
    if source == "kappa":
        return state.kappas()
    if source == "lambda":
        return state.lambdas(0 if state.cf_type == "I" or not simplified else 1)
    if source == "lambda2":
        return state.lambdas(1)
    raise ValueError(f"unknown sequence {source!r}")


def guess_layers(state: CorrectionState, source: str = "kappa", simplified: bool = False,
                 hints: Optional[dict] = None) -> GuessReport:
    rep = guess_general_term(layer_sequence(state, source, simplified), hints)
    return replace(rep, source=source, simplified=simplified)


def verify_guess(spec, state: CorrectionState, guess: GuessReport, extra: int = 2) -> GuessReport:
    """Extend the ladder by ``extra`` layers and compare each new term with the guess.

    ``state`` must be the ladder the guess was made from (same number of layers
    as the guessed sequence).
    """
    from .engine import extend  # the guesser itself never needs the solver

    if guess.form is None:
        return replace(guess, verified=False)
    n_in = len(guess.sequence)
    if not _reproduces(guess.form, guess.sequence[guess.start:], guess.start):
        return replace(guess, verified=False, verification_depth=-1)
    longer = extend(spec, state.truncated(n_in) if state.k > n_in else state, extra)
    seq = layer_sequence(longer, guess.source or "kappa", guess.simplified)
    depth = n_in - 1
    ok = True
    for m in range(n_in, len(seq)):
        if guess.form.evaluate(m) != seq[m]:
            ok = False
            break
        depth = m
    notes = guess.notes
    if len(seq) < n_in + extra:
        notes = notes + (f"engine stopped ({longer.stopped}) after {len(seq)} layers",)
    verified = ok and depth >= n_in - 1 + min(extra, 2) and extra >= 2
    return replace(guess, verification_depth=depth, verified=verified, notes=notes)
