from fractions import Fraction

import pytest

from mcfrac.algebra import (
    Poly,
    RationalFunction,
    as_rational,
    format_poly,
    poly_divmod,
    poly_gcd,
    ratfn_collapse_cf,
)


@pytest.mark.parametrize("value, expected", [
    (3, Fraction(3)),
    ("1/3", Fraction(1, 3)),
    (Fraction(-2, 4), Fraction(-1, 2)),
    ("-7/21", Fraction(-1, 3)),
])
def test_as_rational(value, expected):
    assert as_rational(value) == expected


@pytest.mark.parametrize("bad", [0.5, "0.25", 1e-3])
def test_as_rational_refuses_floats(bad):
    with pytest.raises((TypeError, ValueError)):
        as_rational(bad)


def test_poly_trailing_zeros_and_degree():
    p = Poly((1, 2, 0, 0))
    assert p.degree == 1
    assert p == Poly((1, 2))
    assert Poly(()).is_zero()


def test_poly_arithmetic():
    x = Poly.x()
    p = x * x + Fraction(1, 2) * x + Fraction(1, 8)
    assert p.coeffs == (Fraction(1, 8), Fraction(1, 2), Fraction(1))
    assert (x + 1) ** 3 == Poly((1, 3, 3, 1))
    assert p - p == Poly(())


def test_shift_matches_substitution():
    p = Poly((Fraction(1, 240), Fraction(1, 8), Fraction(1, 2), 1))
    q = p.shift(1)
    for t in (Fraction(-3), Fraction(0), Fraction(5, 7)):
        assert q(t) == p(t + 1)


def test_divmod_and_gcd():
    a = Poly((-1, 0, 1))  # x^2 - 1
    b = Poly((1, 1))
    q, r = poly_divmod(a, b)
    assert q == Poly((-1, 1)) and r.is_zero()
    assert poly_gcd(a * Poly((2, 1)), Poly((3, 1)) * Poly((2, 1))) == Poly((2, 1))
    assert poly_gcd(a * Poly((2, 1)), b * Poly((2, 1))) == b * Poly((2, 1))


def test_rational_function_monic_and_equality():
    r = RationalFunction(Poly((2, 2)), Poly((4, 2)))
    assert r.den.lc == 1
    assert r == RationalFunction(Poly((1, 1)), Poly((2, 1)))
    assert r.reduced() == r
    s = RationalFunction(Poly((-1, 0, 1)), Poly((1, 1)))
    assert s.reduced().den.degree == 0


def test_rational_function_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        RationalFunction(Poly((1,)), Poly(()))


def test_collapse_matches_manual_nesting():
    # x + 1/4 + (1/32)/(x + 1/4 + (9/64)/(x + 1/4))
    d = Poly((Fraction(1, 4), 1))
    r = ratfn_collapse_cf(d, [(Fraction(1, 32), d), (Fraction(9, 64), d)])
    for t in (Fraction(1), Fraction(3, 2), Fraction(10)):
        inner = d(t) + Fraction(9, 64) / d(t)
        assert r(t) == d(t) + Fraction(1, 32) / inner


def test_format_poly():
    assert format_poly(Poly((Fraction(1, 240), Fraction(1, 8), Fraction(1, 2), 1))) == "x^3 + 1/2*x^2 + 1/8*x + 1/240"
    assert format_poly(Poly(())) == "0"
