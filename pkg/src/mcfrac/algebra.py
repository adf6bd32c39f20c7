"""Exact rational polynomials and rational functions.

Coefficients are :class:`fractions.Fraction` throughout; nothing here rounds.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to Fraction; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(ch in text for ch in ".eE") and not text.lower().startswith("0x"):
            raise ValueError(f"decimal literal {value!r} is not an exact rational")
        return Fraction(text)
    raise TypeError(f"cannot treat {type(value).__name__} as an exact rational")


class Poly:
    """Dense univariate polynomial, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls((c,))

    @classmethod
    def monic_linear(cls, b: Scalar) -> "Poly":
        return cls((b, 1))

    @classmethod
    def monic_quadratic(cls, b: Scalar, c: Scalar) -> "Poly":
        return cls((c, b, 1))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __add__(self, other) -> "Poly":
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "Poly":
        return _lift(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = as_rational(other)
            return Poly(c * a for a in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, x):
        """Horner evaluation; works for Fraction, int, mpf or any ring element."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + _coerce_like(c, x)
        return acc

    def shift(self, h: Scalar) -> "Poly":
        """Return q with q(x) = p(x + h)."""
        h = as_rational(h)
        if h == 0 or self.degree <= 0:
            return self
        out = [Fraction(0)] * len(self.coeffs)
        for k, a in enumerate(self.coeffs):
            if a == 0:
                continue
            hp = Fraction(1)
            # a * (x + h)^k = a * sum_j C(k, j) h^(k-j) x^j, built from j = k down
            for j in range(k, -1, -1):
                out[j] += a * comb(k, j) * hp
                hp *= h
        return Poly(out)

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no monic form")
        return self * (1 / self.lc)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        return format_poly(self)


def _lift(p) -> Poly:
    return p if isinstance(p, Poly) else Poly.const(p)


def _coerce_like(c: Fraction, x):
    if isinstance(x, (int, Fraction, Poly)):
        return c
    # mpf and similar: go through the exact integer ratio, never through float
    return type(x)(c.numerator) / c.denominator


def format_poly(p: Poly, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def poly_add(p: Poly, q) -> Poly:
    return p + q


def poly_mul(p: Poly, q) -> Poly:
    return p * q


def poly_scale(p: Poly, c: Scalar) -> Poly:
    return p * as_rational(c)


def poly_shift(p: Poly, h: Scalar) -> Poly:
    return p.shift(h)


class RationalFunction:
    """Quotient of two polynomials with a monic denominator.

    No gcd is taken, so equal functions may carry different representations;
    ``==`` compares by cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _lift(num)
        den = Poly.const(1) if den is None else _lift(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        lc = den.lc
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        self.num = num
        self.den = den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other) -> "RationalFunction":
        other = _rf(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-_rf(other))

    def __rsub__(self, other) -> "RationalFunction":
        return _rf(other) - self

    def __mul__(self, other) -> "RationalFunction":
        other = _rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("reciprocal of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other) -> "RationalFunction":
        return self * _rf(other).reciprocal()

    def __rtruediv__(self, other) -> "RationalFunction":
        return _rf(other) * self.reciprocal()

    def __eq__(self, other) -> bool:
        if not isinstance(other, (RationalFunction, Poly, int, Fraction)):
            return NotImplemented
        other = _rf(other)
        return self.num * other.den == other.num * self.den

    def __hash__(self):  # cross-multiplied equality has no cheap canonical hash
        raise TypeError("RationalFunction is unhashable")

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("rational function pole")
        return self.num(x) / d

    def shift(self, h: Scalar) -> "RationalFunction":
        return RationalFunction(self.num.shift(h), self.den.shift(h))

    def reduced(self) -> "RationalFunction":
        """Cancel the polynomial gcd of numerator and denominator (opt-in; costs a Euclid run)."""
        g = poly_gcd(self.num, self.den)
        if g.degree <= 0:
            return self
        return RationalFunction(poly_divmod(self.num, g)[0], poly_divmod(self.den, g)[0])

    def __repr__(self) -> str:
        return f"RationalFunction(({self.num}) / ({self.den}))"


def _rf(x) -> RationalFunction:
    return x if isinstance(x, RationalFunction) else RationalFunction(x)


def poly_divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if q.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p.coeffs)
    quot = [Fraction(0)] * max(len(rem) - len(q.coeffs) + 1, 0)
    inv = 1 / q.lc
    for i in range(len(quot) - 1, -1, -1):
        c = rem[i + q.degree] * inv
        quot[i] = c
        if c:
            for j, b in enumerate(q.coeffs):
                rem[i + j] -= c * b
    return Poly(quot), Poly(rem[: q.degree] if q.degree > 0 else ())


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over the rationals (zero if both inputs are zero)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    return a if a.is_zero() else a.monic()


def ratfn_collapse_cf(phi0: Poly, layers: Sequence[tuple[Scalar, Poly]]) -> RationalFunction:
    """Collapse ``phi0 + K_j (kappa_j / d_j)`` bottom-up into one rational function."""
    tail = RationalFunction(0)
    for kappa, d in reversed(layers):
        d = _lift(d)
        if d.is_zero():
            raise ZeroDivisionError("layer denominator is the zero polynomial")
        below = tail + d
        if below.is_zero():
            raise ZeroDivisionError("continued fraction collapses through a zero denominator")
        tail = RationalFunction(below.den * as_rational(kappa), below.num)
    return tail + phi0
