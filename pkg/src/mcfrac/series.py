"""Truncated expansions in powers of 1/x with exact rational coefficients.

A series ``sum_{j=start}^{L} c_j x^{-j} + O(x^{-(L+1)})`` is the working object
for every order computation in the correction engine.  Logarithms enter only
through ``log1p`` of series that vanish at infinity, so ``ln x`` terms can never
appear: callers strip them analytically before building a series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import Poly, RationalFunction, as_rational

BEYOND_TRUNCATION = None
"""Sentinel returned by :func:`series_order` when every stored coefficient vanishes."""


@dataclass(frozen=True)
class AsymptoticSeries:
    start: int
    coeffs: tuple[Fraction, ...]
    trunc: int

    def __post_init__(self):
        if self.start < 0:
            raise ValueError("start order must be non-negative")
        if len(self.coeffs) != max(self.trunc - self.start + 1, 0):
            raise ValueError("coefficient count does not match start/truncation orders")

    @classmethod
    def from_dense(cls, dense: Sequence, trunc: int, start: int = 0) -> "AsymptoticSeries":
        """Build from coefficients indexed by absolute order (``dense[j]`` multiplies x^-j)."""
        cs = [as_rational(dense[j]) if j < len(dense) else Fraction(0) for j in range(start, trunc + 1)]
        return cls(start, tuple(cs), trunc)

    @classmethod
    def zero(cls, trunc: int, start: int = 0) -> "AsymptoticSeries":
        return cls(start, (Fraction(0),) * max(trunc - start + 1, 0), trunc)

    @classmethod
    def monomial(cls, c, j: int, trunc: int) -> "AsymptoticSeries":
        dense = [0] * (trunc + 1)
        if j <= trunc:
            dense[j] = c
        return cls.from_dense(dense, trunc, start=min(j, trunc + 1))

    def coeff(self, j: int) -> Fraction:
        if j > self.trunc:
            raise IndexError(f"order {j} lies beyond the truncation order {self.trunc}")
        if j < self.start:
            return Fraction(0)
        return self.coeffs[j - self.start]

    def dense(self) -> list[Fraction]:
        """Coefficients for orders 0..trunc."""
        return [self.coeff(j) for j in range(self.trunc + 1)]

    def truncate(self, trunc: int) -> "AsymptoticSeries":
        trunc = min(trunc, self.trunc)
        return AsymptoticSeries.from_dense(self.dense(), trunc, start=min(self.start, trunc + 1))

    def __add__(self, other: "AsymptoticSeries") -> "AsymptoticSeries":
        trunc = min(self.trunc, other.trunc)
        start = min(self.start, other.start)
        dense = [self.coeff(j) + other.coeff(j) for j in range(trunc + 1)]
        return AsymptoticSeries.from_dense(dense, trunc, start=min(start, trunc + 1))

    def __neg__(self) -> "AsymptoticSeries":
        return AsymptoticSeries(self.start, tuple(-c for c in self.coeffs), self.trunc)

    def __sub__(self, other: "AsymptoticSeries") -> "AsymptoticSeries":
        return self + (-other)

    def scale(self, c) -> "AsymptoticSeries":
        c = as_rational(c)
        return AsymptoticSeries(self.start, tuple(c * a for a in self.coeffs), self.trunc)

    def __mul__(self, other):
        if not isinstance(other, AsymptoticSeries):
            return self.scale(other)
        # error terms: O(x^-(L1+1)) * x^-s2 and x^-s1 * O(x^-(L2+1))
        trunc = min(self.trunc + other.start, other.trunc + self.start)
        start = self.start + other.start
        out = [Fraction(0)] * (trunc + 1)
        for i in range(self.start, self.trunc + 1):
            a = self.coeff(i)
            if a == 0 or i + other.start > trunc:
                continue
            for j in range(other.start, min(other.trunc, trunc - i) + 1):
                b = other.coeff(j)
                if b:
                    out[i + j] += a * b
        return AsymptoticSeries.from_dense(out, trunc, start=min(start, trunc + 1))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, AsymptoticSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.dense() == other.dense()

    def __hash__(self):
        return hash((self.trunc, tuple(self.dense())))

    def __str__(self) -> str:
        terms = []
        for j in range(self.start, self.trunc + 1):
            c = self.coeff(j)
            if c == 0:
                continue
            mono = "" if j == 0 else ("/x" if j == 1 else f"/x^{j}")
            terms.append(f"({c}){mono}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(x^-{self.trunc + 1})"


def series_add(s: AsymptoticSeries, t: AsymptoticSeries) -> AsymptoticSeries:
    return s + t


def series_mul(s: AsymptoticSeries, t: AsymptoticSeries) -> AsymptoticSeries:
    return s * t


def series_neg(s: AsymptoticSeries) -> AsymptoticSeries:
    return -s


def series_order(s: AsymptoticSeries) -> Optional[int]:
    """Index of the first nonzero coefficient, or ``BEYOND_TRUNCATION``."""
    for j in range(s.start, s.trunc + 1):
        if s.coeff(j) != 0:
            return j
    return BEYOND_TRUNCATION


def series_log1p(s: AsymptoticSeries) -> AsymptoticSeries:
    """ln(1 + s) for a series vanishing at infinity.

    Uses the differential relation (1 + s) * w' = s' in the variable z = 1/x,
    i.e. ``n w_n = n s_n - sum_{j<n} j w_j s_{n-j}``, which is O(L^2).
    """
    if series_order(s) == 0:
        raise ValueError("log1p needs a series with start order >= 1; a constant term would leave ln(const)")
    L = s.trunc
    sd = s.dense()
    w = [Fraction(0)] * (L + 1)
    for n in range(1, L + 1):
        acc = n * sd[n]
        for j in range(1, n):
            if w[j] and sd[n - j]:
                acc -= j * w[j] * sd[n - j]
        w[n] = acc / n
    return AsymptoticSeries.from_dense(w, L, start=min(max(s.start, 1), L + 1))


def series_log1p_mercator(s: AsymptoticSeries) -> AsymptoticSeries:
    """Reference ln(1+s) = s - s^2/2 + s^3/3 - ... summed term by term (slow; for checks)."""
    if series_order(s) == 0:
        raise ValueError("log1p needs a series with start order >= 1")
    L = s.trunc
    total = AsymptoticSeries.zero(L, start=min(max(s.start, 1), L + 1))
    power = s
    k = 1
    while series_order(power) is not BEYOND_TRUNCATION:
        total = total + power.scale(Fraction((-1) ** (k + 1), k))
        power = (power * s).truncate(L)
        power = AsymptoticSeries.from_dense(power.dense(), L, start=min(power.start, L + 1))
        k += 1
    return total


def _unit_tail(p: Poly, trunc: int) -> AsymptoticSeries:
    """u with p(x) = lc * x^deg * (1 + u(1/x))."""
    d = p.degree
    lc = p.lc
    dense = [Fraction(0)] * (trunc + 1)
    for j in range(1, min(d, trunc) + 1):
        dense[j] = p.coeff(d - j) / lc
    return AsymptoticSeries.from_dense(dense, trunc, start=min(1, trunc + 1))


def log_shift_ratio_poly(p: Poly, trunc: int) -> AsymptoticSeries:
    """Expansion of ln p(x) - ln p(x+1); the degree and leading-coefficient logs cancel."""
    if p.is_zero():
        raise ValueError("log of the zero polynomial")
    if p.degree == 0:
        return AsymptoticSeries.zero(trunc, start=min(1, trunc + 1))
    here = series_log1p(_unit_tail(p, trunc))
    there = series_log1p(_unit_tail(p.shift(1), trunc))
    return here - there


def log_shift_ratio_ratfn(r: RationalFunction, trunc: int) -> AsymptoticSeries:
    """Expansion of ln r(x) - ln r(x+1)."""
    if r.is_zero():
        raise ValueError("log of the zero rational function")
    return log_shift_ratio_poly(r.num, trunc) - log_shift_ratio_poly(r.den, trunc)


def log1p_linear(a, trunc: int) -> AsymptoticSeries:
    """ln(1 + a/x) = sum_{j>=1} (-1)^(j+1) a^j / j x^-j."""
    a = as_rational(a)
    dense = [Fraction(0)] + [Fraction((-1) ** (j + 1), j) * a**j for j in range(1, trunc + 1)]
    return AsymptoticSeries.from_dense(dense, trunc, start=min(1, trunc + 1))


def stirling_kernel(trunc: int) -> AsymptoticSeries:
    """1 - x ln(1 + 1/x) = 1/(2x) - 1/(3x^2) + 1/(4x^3) - ..."""
    if trunc < 1:
        raise ValueError("stirling kernel needs truncation order >= 1")
    dense = [Fraction(0)] + [Fraction((-1) ** (j + 1), j + 1) for j in range(1, trunc + 1)]
    return AsymptoticSeries.from_dense(dense, trunc, start=1)
