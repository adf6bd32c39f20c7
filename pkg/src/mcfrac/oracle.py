"""High-precision numeric ground truth.

``ln_gamma`` is written here from the Stirling series with argument lifting and
never calls into the correction engine, so engine/oracle agreement is evidence
rather than a tautology.  mpmath supplies only the binary floating-point type
(``mpf``), elementary functions and pi.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mpf

DEFAULT_PREC = 256
GUARD_BITS = 24


def _mpq(q) -> mpf:
    q = Fraction(q)
    return mpf(q.numerator) / q.denominator


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    """B_0..B_n exactly, via sum_{k<m+1} C(m+1, k) B_k = 0."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * B[k]
        B.append(-acc / (m + 1))
    return tuple(B)


def bernoulli(n: int) -> Fraction:
    return _bernoulli_table(n)[n]


def _stirling_tail(z: mpf, eps: mpf) -> tuple[mpf, mpf]:
    """Sum B_2k / (2k(2k-1) z^(2k-1)) until the terms drop below eps.

    Returns (sum, bound) where bound is the first omitted term; for real z > 0
    the remainder is bounded by it in absolute value.
    """
    total = mpf(0)
    z2 = z * z
    zpow = z
    k = 1
    while True:
        b = bernoulli(2 * k)
        term = _mpq(b) / (2 * k * (2 * k - 1)) / zpow
        if abs(term) < eps:
            return total, abs(term)
        total += term
        zpow *= z2
        k += 1
        if k > 4000:  # pragma: no cover - lifting makes this unreachable
            raise ArithmeticError("Stirling series failed to reach the requested precision")


def ln_gamma(x, prec: int = DEFAULT_PREC) -> mpf:
    """ln Gamma(x) for real x > 0.

    The argument is lifted to z = x + N with z >= 0.35 * prec + 10 so that the
    asymptotic series reaches 2^-(prec + guard) before its terms turn around;
    ln Gamma(x) = ln Gamma(z) - ln(x (x+1) ... (x+N-1)).  The absolute error is
    below 2^-(prec - 8) for moderate x, the guard covering the product's log.
    """
    with mpmath.workprec(prec + GUARD_BITS):
        x = x if isinstance(x, mpf) else (_mpq(x) if isinstance(x, (int, Fraction)) else mpf(x))
        if x <= 0:
            raise ValueError("ln_gamma is defined here only for x > 0")
        zmin = 0.35 * prec + 10
        n_lift = max(0, int(math.ceil(zmin - float(x))))
        z = x + n_lift
        eps = mpf(2) ** (-(prec + GUARD_BITS))
        tail, _bound = _stirling_tail(z, eps)
        result = (z - mpf(1) / 2) * mpmath.log(z) - z + mpmath.log(2 * mpmath.pi) / 2 + tail
        if n_lift:
            prod = mpf(1)
            for j in range(n_lift):
                prod *= x + j
            result -= mpmath.log(prod)
        return +result


def gamma(x, prec: int = DEFAULT_PREC) -> mpf:
    with mpmath.workprec(prec + GUARD_BITS):
        return mpmath.exp(ln_gamma(x, prec))


def unit_ball_volume(n: int, prec: int = DEFAULT_PREC) -> mpf:
    """Omega_n = pi^(n/2) / Gamma(n/2 + 1)."""
    if n < 0:
        raise ValueError("dimension must be non-negative")
    with mpmath.workprec(prec + GUARD_BITS):
        half = Fraction(n, 2)
        return mpmath.exp(_mpq(half) * mpmath.log(mpmath.pi) - ln_gamma(half + 1, prec))


def log_f(spec, x, prec: int = DEFAULT_PREC) -> mpf:
    """ln f(x) for a FunctionSpec: prefactor, gamma factors and the (x/e)^(s x) power."""
    with mpmath.workprec(prec + GUARD_BITS):
        x = x if isinstance(x, mpf) else _mpq(x) if isinstance(x, (int, Fraction)) else mpf(x)
        total = mpmath.log(_mpq(spec.prefactor)) + spec.pi_power * mpmath.log(mpmath.pi)
        for shift, exponent in spec.gamma_factors:
            arg = x + _mpq(shift)
            if arg <= 0:
                raise ValueError(f"gamma argument x + {shift} is not positive at x = {x}")
            total += exponent * ln_gamma(arg, prec + 8)
        if spec.stirling_power:
            total += spec.stirling_power * x * (mpmath.log(x) - 1)
        return total


def eval_f(spec, x, prec: int = DEFAULT_PREC) -> mpf:
    with mpmath.workprec(prec + GUARD_BITS):
        return mpmath.exp(log_f(spec, x, prec))


def limit_check(spec, x=10**4, prec: int = DEFAULT_PREC, rtol: float = 1e-2) -> tuple[bool, mpf]:
    """Compare x^nu f(x) with the declared limit constant c at a large x."""
    with mpmath.workprec(prec + GUARD_BITS):
        xv = _mpq(x)
        value = mpmath.exp(log_f(spec, xv, prec) + spec.nu * mpmath.log(xv))
        c = _mpq(spec.c)
        return bool(abs(value / c - 1) < rtol), value
