"""The multiple-correction solver.

Every unknown (a Phi0 coefficient, a kappa or a lambda) is fixed by zeroing the
lowest surviving coefficient of

    MT = ln f(x)/f(x+1) + ln D(x)/D(x+1),     D = Phi0 + MC_k,

computed exactly as an :class:`AsymptoticSeries`.  Instead of carrying the
unknown symbolically, the series is built at a few trial values and the
target coefficient is interpolated (it is affine in the unknown in every case
met so far; a polynomial fallback covers the rest).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import mpmath
from mpmath import mpf

from . import oracle
from .algebra import Poly, as_rational, ratfn_collapse_cf
from .contfrac import TYPE_I, TYPE_II, CorrectionState, Layer, SingularEvaluationError, eval_state
from .series import (
    BEYOND_TRUNCATION,
    AsymptoticSeries,
    log1p_linear,
    log_shift_ratio_ratfn,
    series_order,
    stirling_kernel,
)


class SpecError(ValueError):
    """The function description is inconsistent (ln x terms survive, bad nu, ...)."""


class EngineError(RuntimeError):
    """The solver could not proceed (unsolvable Phi0, persistent truncation shortfall)."""


class BeyondTruncation(EngineError):
    pass


MAX_RETRIES = 3
MARGIN = 4


@dataclass(frozen=True)
class FunctionSpec:
    """f(x) = prefactor * pi^pi_power * prod Gamma(x + a_i)^e_i * (x/e)^(s x).

    ``nu`` and ``c`` may be omitted for pure gamma products; they are then
    nu = -sum e_i a_i and c = prefactor.  A negative nu describes a function
    growing like x^|nu|; its ladder approximates c * D(x) instead of c / D(x).
    """

    gamma_factors: tuple[tuple[Fraction, int], ...]
    stirling_power: int = 0
    nu: Optional[int] = None
    c: Optional[Fraction] = None
    prefactor: Fraction = Fraction(1)
    pi_power: int = 0
    label: str = ""

    def __post_init__(self):
        factors = tuple((as_rational(a), int(e)) for a, e in self.gamma_factors)
        object.__setattr__(self, "gamma_factors", factors)
        object.__setattr__(self, "prefactor", as_rational(self.prefactor))
        if self.prefactor <= 0:
            raise SpecError("prefactor must be positive")
        s = int(self.stirling_power)
        object.__setattr__(self, "stirling_power", s)
        if any(e == 0 for _, e in factors):
            raise SpecError("gamma factor with exponent 0")
        log_x = -sum(e for _, e in factors) - s
        if log_x != 0:
            raise SpecError(
                f"ln x does not cancel in ln f(x)/f(x+1): sum of -e_i minus s is {log_x}, expected 0"
            )
        derived = -sum(e * a for a, e in factors)
        if s == 0:
            if derived.denominator != 1 or derived == 0:
                raise SpecError(f"-sum e_i a_i = {derived} must be a nonzero integer for a gamma product")
            if self.nu is not None and self.nu != derived:
                raise SpecError(f"declared nu = {self.nu} but the gamma factors give {derived}")
            object.__setattr__(self, "nu", int(derived))
            if self.c is None:
                if self.pi_power:
                    raise SpecError("c must be declared when a power of pi is present")
                object.__setattr__(self, "c", self.prefactor)
        else:
            if self.nu is None or self.c is None:
                raise SpecError("Stirling-type specs must declare nu and c")
        if self.nu == 0:
            raise SpecError("nu must be nonzero")
        object.__setattr__(self, "nu", int(self.nu))
        object.__setattr__(self, "c", as_rational(self.c))
        if self.c <= 0:
            raise SpecError("the limit constant c must be positive")

    @property
    def degree(self) -> int:
        """Degree of Phi0 (|nu|)."""
        return abs(self.nu)

    @property
    def orientation(self) -> int:
        """+1 when f ~ c / D, -1 when f ~ c * D."""
        return 1 if self.nu > 0 else -1

    def reciprocal(self) -> "FunctionSpec":
        return FunctionSpec(
            gamma_factors=tuple((a, -e) for a, e in self.gamma_factors),
            stirling_power=-self.stirling_power,
            nu=-self.nu,
            c=1 / self.c,
            prefactor=1 / self.prefactor,
            pi_power=-self.pi_power,
            label=f"1/({self.label})" if self.label else "",
        )


@dataclass(frozen=True)
class MtExpansion:
    state: CorrectionState
    series: AsymptoticSeries
    order: Optional[int]


@dataclass(frozen=True)
class _Probe:
    """Outcome of solving one unknown."""

    value: Optional[Fraction]  # None: target coefficient does not depend on the unknown
    order: int
    note: Optional[str] = None


# --- series --------------------------------------------------------------------


@lru_cache(maxsize=256)
def _log_f_ratio_cached(spec: FunctionSpec, trunc: int) -> AsymptoticSeries:
    total = AsymptoticSeries.zero(trunc, start=1)
    for a, e in spec.gamma_factors:
        total = total + log1p_linear(a, trunc).scale(-e)
    s = spec.stirling_power
    if s:
        total = total + stirling_kernel(trunc).scale(s) - log1p_linear(1, trunc).scale(s)
    if series_order(total) == 0:  # pragma: no cover - excluded by construction
        raise SpecError("constant term survives in ln f(x)/f(x+1)")
    return total


def log_f_ratio(spec: FunctionSpec, trunc: int) -> AsymptoticSeries:
    """Exact expansion of ln f(x) - ln f(x+1) through x^-trunc."""
    return _log_f_ratio_cached(spec, trunc)


def _oriented_base(spec: FunctionSpec, trunc: int) -> AsymptoticSeries:
    # for f ~ c * D the telescoped difference is ln f(x)/f(x+1) - ln D(x)/D(x+1)
    base = log_f_ratio(spec, trunc)
    return base if spec.orientation > 0 else -base


def _mt_of(spec: FunctionSpec, phi0: Poly, layers, shift, trunc: int) -> AsymptoticSeries:
    # probes may carry kappa = 0, which a CorrectionState refuses
    r = ratfn_collapse_cf(phi0, [(layer.kappa, layer.denominator()) for layer in layers])
    if shift:
        r = r.shift(shift)
    return _oriented_base(spec, trunc) + log_shift_ratio_ratfn(r, trunc)


def mt_series(spec: FunctionSpec, state: CorrectionState, trunc: int) -> MtExpansion:
    """MT expansion of a state (up to the orientation sign for growing f)."""
    s = _oriented_base(spec, trunc) + log_shift_ratio_ratfn(state.rational_function(), trunc)
    return MtExpansion(state=state, series=s, order=series_order(s))


# --- probing -------------------------------------------------------------------


def _interpolate(ts: list[Fraction], ys: list[Fraction]) -> list[Fraction]:
    """Ascending coefficients of the interpolating polynomial (Newton form, exact)."""
    n = len(ts)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (ts[i] - ts[i - j])
    poly = Poly((coef[-1],))
    for i in range(n - 2, -1, -1):
        poly = poly * Poly((-ts[i], 1)) + coef[i]
    return list(poly.coeffs)


def _rational_roots(coeffs: list[Fraction]) -> list[Fraction]:
    """Rational roots of a small-degree polynomial.

    Real roots are located numerically, recognised as short rationals with a
    continued-fraction search, and each candidate is confirmed exactly.
    """
    p = Poly(coeffs)
    if p.degree < 1:
        return []
    roots = set()
    if p.coeff(0) == 0:
        roots.add(Fraction(0))
    with mpmath.workprec(400):
        approx = mpmath.polyroots([mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)],
                                  maxsteps=200, extraprec=400)
        for r in approx:
            if abs(mpmath.im(r)) > mpf(10) ** -30 * (1 + abs(r)):
                continue
            re = mpmath.re(r)
            for bound in (10**3, 10**6, 10**12, 10**24, 10**48):
                q = Fraction(mpmath.nstr(re, 110, strip_zeros=False)).limit_denominator(bound)
                if p(q) == 0:
                    roots.add(q)
                    break
    return sorted(roots)


def _solve_at(build: Callable[[Fraction], AsymptoticSeries], base_t: list[Fraction]) -> _Probe:
    probes = {t: build(t) for t in base_t}
    orders = [series_order(s) for s in probes.values()]
    finite = [o for o in orders if o is not BEYOND_TRUNCATION]
    if not finite:
        raise BeyondTruncation("every probe vanishes through the truncation order")
    r = min(finite)
    ts = list(probes)
    ys = [probes[t].coeff(r) for t in ts]
    if ys[0] == ys[1] == ys[2]:
        return _Probe(value=None, order=r)
    beta = (ys[1] - ys[0]) / (ts[1] - ts[0])
    if ys[2] == ys[0] + beta * (ts[2] - ts[0]):
        if beta == 0:  # pragma: no cover - excluded above
            return _Probe(value=None, order=r)
        return _Probe(value=ts[0] - ys[0] / beta, order=r)
    return _solve_nonaffine(build, r)


def _solve_nonaffine(build, r: int) -> _Probe:
    """Degree <= 4 interpolation through five probes, confirmed by a sixth."""
    ts = [Fraction(t) for t in range(6)]
    ys = [build(t).coeff(r) for t in ts]
    coeffs = _interpolate(ts[:5], ys[:5])
    if Poly(coeffs)(ts[5]) != ys[5]:
        raise EngineError(f"target coefficient at order {r} is not polynomial of degree <= 4 in the unknown")
    roots = _rational_roots(coeffs)
    if not roots:
        return _Probe(value=None, order=r, note="no rational root")

    def rank(root):
        o = series_order(build(root))
        o = float("inf") if o is BEYOND_TRUNCATION else o
        return (-o, abs(root), root < 0)

    ranked = sorted(roots, key=rank)
    note = None
    if len(ranked) > 1 and rank(ranked[0])[0] == rank(ranked[1])[0]:
        note = f"tie between roots {ranked[0]} and {ranked[1]} resolved by size/sign"
    return _Probe(value=ranked[0], order=r, note=note)


def _solve_unknown(make_build: Callable[[int], Callable[[Fraction], AsymptoticSeries]], base_trunc: int) -> _Probe:
    """Solve one unknown, widening the truncation when the probes run out of terms."""
    last = None
    for attempt in range(MAX_RETRIES + 1):
        trunc = base_trunc + MARGIN * (2**attempt - 1)
        try:
            return _solve_at(make_build(trunc), [Fraction(0), Fraction(1), Fraction(2)])
        except BeyondTruncation as exc:
            last = exc
    raise EngineError(f"beyond truncation after {MAX_RETRIES} retries: {last}")


def _trunc_for(spec: FunctionSpec, k: int, cf_type: Optional[str]) -> int:
    nu = spec.degree
    return nu + 4 * k + 8 if cf_type == TYPE_II else nu + 2 * k + 6


# --- solving -------------------------------------------------------------------


def solve_phi0(spec: FunctionSpec) -> Poly:
    """Monic Phi0 of degree |nu|, coefficients solved from x^(nu-1) downwards."""
    nu = spec.degree
    coeffs = [Fraction(0)] * nu + [Fraction(1)]
    for idx in range(nu - 1, -1, -1):

        def make_build(trunc, idx=idx):
            def build(t):
                cs = list(coeffs)
                cs[idx] = t
                return _mt_of(spec, Poly(cs), (), Fraction(0), trunc)

            return build

        res = _solve_unknown(make_build, nu + 6)
        if res.value is None:
            raise EngineError("initial correction unsolvable")
        coeffs[idx] = res.value
    return Poly(coeffs)


def _layer_build(state: CorrectionState, mk_layer: Callable[[Fraction], Layer]):
    spec = state.spec

    def make_build(trunc):
        def build(t):
            return _mt_of(spec, state.phi0, state.layers + (mk_layer(t),), state.shift, trunc)

        return build

    return make_build


def _try_layer(state: CorrectionState, cf_type: str) -> tuple[Optional[Layer], Optional[str], tuple[str, ...]]:
    """Solve kappa then the lambdas of the next layer; return (layer, failure reason, notes)."""
    spec = state.spec
    trunc = _trunc_for(spec, state.k, cf_type)
    zeros = (Fraction(0),) if cf_type == TYPE_I else (Fraction(0), Fraction(0))
    notes = []
    kres = _solve_unknown(_layer_build(state, lambda t: Layer(t, zeros)), trunc)
    if kres.note:
        notes.append(f"kappa_{state.k}: {kres.note}")
    if kres.value is None or kres.value == 0:
        return None, "kappa zero", tuple(notes)
    kappa = kres.value
    lams: list[Fraction] = []
    for i in range(len(zeros)):

        def mk(t, i=i):
            vals = lams + [t] + [Fraction(0)] * (len(zeros) - i - 1)
            return Layer(kappa, tuple(vals))

        lres = _solve_unknown(_layer_build(state, mk), trunc)
        if lres.note:
            notes.append(f"lambda_{state.k}: {lres.note}")
        if lres.value is None:
            return None, "structure exhausted", tuple(notes)
        lams.append(lres.value)
    return Layer(kappa, tuple(lams)), None, tuple(notes)


def solve_next_layer(spec: FunctionSpec, state: CorrectionState) -> CorrectionState:
    """Add one correction layer, or mark the state stopped with a reason."""
    if state.stopped:
        raise EngineError(f"state already stopped: {state.stopped}")
    if state.shift:
        raise EngineError("solve on the unsimplified state; simplified forms are for display")
    if state.spec is not spec:
        state = replace(state, spec=spec)
    if state.cf_type in (None, TYPE_I):
        layer, reason, notes = _try_layer(state, TYPE_I)
        if layer is not None:
            return replace(state.with_layer(layer), notes=state.notes + notes)
        if state.cf_type == TYPE_I:
            return replace(state, stopped=reason, notes=state.notes + notes)
    layer, reason, notes = _try_layer(state, TYPE_II)
    if layer is not None:
        return replace(state.with_layer(layer), notes=state.notes + notes)
    return replace(state, stopped=reason if reason == "kappa zero" and state.k else "structure exhausted",
                   notes=state.notes + notes)


def initial_state(spec: FunctionSpec) -> CorrectionState:
    return CorrectionState(spec=spec, phi0=solve_phi0(spec))


def run_corrections(spec: FunctionSpec, k_max: int, start: Optional[CorrectionState] = None) -> CorrectionState:
    """Phi0 and up to k_max layers (fewer if the process stops)."""
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    state = start if start is not None else initial_state(spec)
    while state.k < k_max and not state.stopped:
        state = solve_next_layer(spec, state)
    return state


def extend(spec: FunctionSpec, state: CorrectionState, extra: int) -> CorrectionState:
    return run_corrections(spec, state.k + extra, start=state)


# --- rates and numerics --------------------------------------------------------


def rate_of_convergence(spec: FunctionSpec, state: CorrectionState) -> Optional[int]:
    """K with f - CF_k = O(x^-K), via K = |nu| - 1 + order(MT); None if beyond truncation."""
    base = _trunc_for(spec, state.k, state.cf_type) + 2
    for attempt in range(MAX_RETRIES + 1):
        trunc = base + MARGIN * (2**attempt - 1)
        order = mt_series(spec, state, trunc).order
        if order is not BEYOND_TRUNCATION:
            return spec.degree - 1 + order
    return BEYOND_TRUNCATION


def approx_value(spec: FunctionSpec, state: CorrectionState, x, prec: int = oracle.DEFAULT_PREC,
                 depth: Optional[int] = None) -> mpf:
    """CF_k(f)(x): c / D(x), or c * D(x) for growing f."""
    with mpmath.workprec(prec + oracle.GUARD_BITS):
        d = eval_state(state, x, depth, prec + oracle.GUARD_BITS)
        c = oracle._mpq(spec.c)
        if spec.orientation > 0:
            if d == 0:
                raise SingularEvaluationError("ladder vanishes")
            return c / d
        return c * d


def relative_error(spec: FunctionSpec, state: CorrectionState, x, prec: int = oracle.DEFAULT_PREC) -> mpf:
    """E_k(x) = ln(f(x) / CF_k(f)(x))."""
    with mpmath.workprec(prec + oracle.GUARD_BITS):
        d = eval_state(state, x, None, prec + oracle.GUARD_BITS)
        if d <= 0:
            raise SingularEvaluationError(f"D(x) = {d} is not positive")
        lf = oracle.log_f(spec, x, prec)
        return lf - mpmath.log(oracle._mpq(spec.c)) + spec.orientation * mpmath.log(d)


def kappa_sequence(state: CorrectionState) -> list[Fraction]:
    return state.kappas()


def lambda_sequence(state: CorrectionState, index: int = 0) -> list[Fraction]:
    return state.lambdas(index)


def theta0(spec: FunctionSpec, states: list[CorrectionState]) -> Optional[int]:
    """Observed theta_0 in K = 2k + 2nu + 1 + theta_0 (Type-I) or 4k + 2nu + 1 + theta_0 (Type-II)."""
    seen = set()
    for st in states:
        K = rate_of_convergence(spec, st)
        if K is None:
            continue
        step = 4 if st.cf_type == TYPE_II else 2
        seen.add(K - step * st.k - 2 * spec.degree - 1)
    return seen.pop() if len(seen) == 1 else None
