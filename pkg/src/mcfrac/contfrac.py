"""Generalized continued fractions and correction ladders.

A ladder is ``Phi0(x) + K_j kappa_j / d_j(x)`` with linear (Type-I) or quadratic
(Type-II) partial denominators ``d_j``.  Exact convergents use the canonical
A/B recurrence; numeric evaluation runs tail-first in mpmath.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath
from mpmath import mpf

from .algebra import Poly, RationalFunction, as_rational, ratfn_collapse_cf

TYPE_I = "I"
TYPE_II = "II"

TailRule = Callable[[int], tuple[RationalFunction, RationalFunction]]


class SingularEvaluationError(ArithmeticError):
    """A partial denominator fell below the working precision during evaluation."""


def _rf(v) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    return RationalFunction(v)


@dataclass(frozen=True)
class GeneralizedCF:
    """``outer / (b0 + K_{n>=1} a_n / b_n)``, or just the bracket when ``outer`` is None.

    ``a`` and ``b`` hold an explicit prefix (index 0 is a_1/b_1); ``tail`` may
    generate (a_n, b_n) for n beyond it, lazily.
    """

    b0: RationalFunction
    a: tuple[RationalFunction, ...] = ()
    b: tuple[RationalFunction, ...] = ()
    tail: Optional[TailRule] = field(default=None, compare=False)
    outer: Optional[RationalFunction] = None

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ValueError("partial numerator and denominator lists differ in length")
        object.__setattr__(self, "b0", _rf(self.b0))
        object.__setattr__(self, "a", tuple(_rf(v) for v in self.a))
        object.__setattr__(self, "b", tuple(_rf(v) for v in self.b))
        if self.outer is not None:
            object.__setattr__(self, "outer", _rf(self.outer))
        if any(v.is_zero() for v in self.a):
            raise ValueError("stored partial numerators must be nonzero")

    @property
    def stored(self) -> int:
        return len(self.a)

    def term(self, n: int) -> tuple[RationalFunction, RationalFunction]:
        """(a_n, b_n) for n >= 1, from the stored prefix or the tail rule."""
        if n < 1:
            raise IndexError("partial quotients are numbered from 1")
        if n <= len(self.a):
            return self.a[n - 1], self.b[n - 1]
        if self.tail is None:
            raise IndexError(f"depth {n} exceeds the {len(self.a)} stored terms and no tail rule is set")
        an, bn = self.tail(n)
        return _rf(an), _rf(bn)


def convergent(cf: GeneralizedCF, n: int) -> RationalFunction:
    """A_n / B_n of ``b0 + K a/b`` (``outer`` is not applied)."""
    A_prev, B_prev = RationalFunction(1), RationalFunction(0)
    A, B = cf.b0, RationalFunction(1)
    for j in range(1, n + 1):
        aj, bj = cf.term(j)
        A, A_prev = bj * A + aj * A_prev, A
        B, B_prev = bj * B + aj * B_prev, B
    return A / B


def eval_cf(cf: GeneralizedCF, x, depth: int, prec: int = 256, guard: int = 16) -> mpf:
    """Evaluate the depth-truncated fraction at x, tail first.

    Each layer may cost a few bits through cancellation in ``b_n + t``; a
    denominator smaller than 2^-(prec - guard) times its parts raises
    :class:`SingularEvaluationError` instead of returning noise.
    """
    with mpmath.workprec(prec + guard):
        xv = _to_mpf(x)
        tiny = mpf(2) ** (guard - prec)
        t = mpf(0)
        for n in range(depth, 0, -1):
            an, bn = cf.term(n)
            bv = bn(xv)
            den = bv + t
            if abs(den) <= tiny * (abs(bv) + abs(t) + 1):
                raise SingularEvaluationError(f"partial denominator {n} vanishes at x = {x}")
            t = an(xv) / den
        val = cf.b0(xv) + t
        if cf.outer is not None:
            if abs(val) <= tiny * (abs(t) + 1):
                raise SingularEvaluationError(f"continued fraction vanishes at x = {x}")
            val = cf.outer(xv) / val
        return +val


def _to_mpf(x) -> mpf:
    if isinstance(x, mpf):
        return x
    if isinstance(x, (int, Fraction)):
        q = Fraction(x)
        return mpf(q.numerator) / q.denominator
    return mpf(x)


# --- correction ladders -----------------------------------------------------


@dataclass(frozen=True)
class Layer:
    """One correction layer kappa / (x + lam) or kappa / (x^2 + lam1 x + lam2)."""

    kappa: Fraction
    lambdas: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "kappa", as_rational(self.kappa))
        object.__setattr__(self, "lambdas", tuple(as_rational(v) for v in self.lambdas))
        if len(self.lambdas) not in (1, 2):
            raise ValueError("a layer has one (Type-I) or two (Type-II) lambda values")

    @property
    def cf_type(self) -> str:
        return TYPE_I if len(self.lambdas) == 1 else TYPE_II

    def denominator(self) -> Poly:
        if len(self.lambdas) == 1:
            return Poly.monic_linear(self.lambdas[0])
        return Poly.monic_quadratic(*self.lambdas)


@dataclass(frozen=True)
class CorrectionState:
    """Phi0 plus solved layers.

    ``shift`` is nonzero only for simplified forms: the polynomials are then in
    the variable x_hat = x + shift.
    """

    spec: object
    phi0: Poly
    cf_type: Optional[str] = None
    layers: tuple[Layer, ...] = ()
    stopped: Optional[str] = None
    shift: Fraction = Fraction(0)
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.phi0.lc != 1:
            raise ValueError("Phi0 must be monic")
        for layer in self.layers:
            if layer.kappa == 0:
                raise ValueError("a completed layer cannot have kappa = 0")
            if self.cf_type is not None and layer.cf_type != self.cf_type:
                raise ValueError("mixed Type-I/Type-II ladders are not supported")

    @property
    def nu(self) -> int:
        return self.phi0.degree

    @property
    def k(self) -> int:
        return len(self.layers)

    def kappas(self) -> list[Fraction]:
        return [layer.kappa for layer in self.layers]

    def lambdas(self, index: int = 0) -> list[Fraction]:
        return [layer.lambdas[index] for layer in self.layers]

    def with_layer(self, layer: Layer) -> "CorrectionState":
        return replace(self, layers=self.layers + (layer,), cf_type=layer.cf_type)

    def truncated(self, k: int) -> "CorrectionState":
        return replace(self, layers=self.layers[:k], stopped=None if k < self.k else self.stopped)

    def collapse(self) -> RationalFunction:
        """Phi0 + MC_k as a single rational function of the state's own variable."""
        return ratfn_collapse_cf(self.phi0, [(layer.kappa, layer.denominator()) for layer in self.layers])

    def rational_function(self) -> RationalFunction:
        """Phi0 + MC_k as a rational function of the original x."""
        r = self.collapse()
        return r.shift(self.shift) if self.shift else r


@dataclass(frozen=True)
class McPoint:
    omega: Fraction
    shifted: bool = False


def state_to_cf(state: CorrectionState) -> GeneralizedCF:
    """CF_k as ``1 / (Phi0 + K kappa_j / d_j)`` in the state's own variable."""
    return GeneralizedCF(
        b0=RationalFunction(state.phi0),
        a=tuple(RationalFunction(layer.kappa) for layer in state.layers),
        b=tuple(RationalFunction(layer.denominator()) for layer in state.layers),
        outer=RationalFunction(1),
    )


def detect_mc_point(state: CorrectionState) -> Optional[McPoint]:
    """Common shift of all partial denominators, if there is one.

    Fewer than two layers cannot witness a constant sequence, so None is returned.
    """
    if state.k < 2:
        return None
    firsts = {layer.lambdas[0] for layer in state.layers}
    if len(firsts) != 1:
        return None
    b = firsts.pop()
    omega = b if state.cf_type == TYPE_I else b / 2
    return McPoint(omega=omega + state.shift, shifted=bool(state.shift))


def to_simplified_form(state: CorrectionState, mc: Optional[McPoint]) -> CorrectionState:
    """Rewrite the ladder in x_hat = x + omega; Type-II constants become c - b^2/4."""
    if mc is None:
        raise ValueError("no MC-point: the ladder has no simplified form")
    omega = mc.omega - state.shift
    if omega == 0:
        return state
    phi_hat = state.phi0.shift(-omega)
    layers = []
    for layer in state.layers:
        if layer.cf_type == TYPE_I:
            lam = layer.lambdas[0] - omega
            layers.append(Layer(layer.kappa, (lam,)))
        else:
            b, c = layer.lambdas
            # (xh - w)^2 + b (xh - w) + c = xh^2 + (b - 2w) xh + (w^2 - b w + c)
            layers.append(Layer(layer.kappa, (b - 2 * omega, omega * omega - b * omega + c)))
    return replace(state, phi0=phi_hat, layers=tuple(layers), shift=state.shift + omega)


def eval_state(state: CorrectionState, x, depth: Optional[int] = None, prec: int = 256) -> mpf:
    """Phi0(x) + MC_depth(x) at the original variable x (before any 1/. or constant)."""
    depth = state.k if depth is None else depth
    cf = state_to_cf(state)
    bare = GeneralizedCF(b0=cf.b0, a=cf.a, b=cf.b)
    with mpmath.workprec(prec + 16):
        xv = _to_mpf(x) + _to_mpf(state.shift)
        return eval_cf(bare, xv, depth, prec)


def ladder_cf(phi0: RationalFunction, kappa: Callable[[int], Fraction], denom: Callable[[int], RationalFunction],
              outer: Optional[RationalFunction] = None) -> GeneralizedCF:
    """Infinite ladder ``outer / (phi0 + K_{j>=0} kappa(j) / denom(j))`` driven by a tail rule."""

    def rule(n: int):
        return RationalFunction(kappa(n - 1)), denom(n - 1)

    return GeneralizedCF(b0=phi0, tail=rule, outer=outer)


def nested_value(b0, pairs: Sequence[tuple]) -> Fraction:
    """Exact bottom-up evaluation of b0 + a1/(b1 + a2/(b2 + ...)) for rational entries."""
    t = Fraction(0)
    for a, b in reversed(pairs):
        t = Fraction(a) / (Fraction(b) + t)
    return Fraction(b0) + t
