from fractions import Fraction

import pytest

from mcfrac.algebra import Poly, RationalFunction
from mcfrac.series import (
    BEYOND_TRUNCATION,
    AsymptoticSeries,
    log1p_linear,
    log_shift_ratio_poly,
    log_shift_ratio_ratfn,
    series_log1p,
    series_log1p_mercator,
    series_order,
    stirling_kernel,
)


def test_construction_and_coeff():
    s = AsymptoticSeries.from_dense([0, 1, Fraction(1, 2)], trunc=4, start=1)
    assert s.coeff(0) == 0 and s.coeff(2) == Fraction(1, 2) and s.coeff(4) == 0
    with pytest.raises(IndexError):
        s.coeff(5)
    with pytest.raises(ValueError):
        AsymptoticSeries(0, (Fraction(1),), 3)


def test_order_and_beyond_truncation():
    assert series_order(AsymptoticSeries.monomial(3, 2, 6)) == 2
    assert series_order(AsymptoticSeries.zero(6)) is BEYOND_TRUNCATION


def test_product_truncation_bookkeeping():
    a = AsymptoticSeries.from_dense([0, 1, 1], trunc=5, start=1)
    b = AsymptoticSeries.from_dense([0, 0, 1], trunc=5, start=2)
    p = a * b
    # O(x^-6) * x^-2 limits the product to order 7, but x^-1 * O(x^-6) limits it to 6
    assert p.trunc == 6
    assert p.coeff(3) == 1 and p.coeff(4) == 1


def test_log1p_linear_matches_general():
    trunc = 10
    a = Fraction(-3, 7)
    lin = log1p_linear(a, trunc)
    gen = series_log1p(AsymptoticSeries.monomial(a, 1, trunc))
    assert lin == gen


def test_log1p_requires_vanishing_input():
    with pytest.raises(ValueError):
        series_log1p(AsymptoticSeries.from_dense([1, 1], trunc=3))


def test_recurrence_and_mercator_agree():
    s = AsymptoticSeries.from_dense([0, Fraction(1, 3), -2, Fraction(5, 4)], trunc=9, start=1)
    assert series_log1p(s) == series_log1p_mercator(s)


def test_stirling_kernel_head():
    k = stirling_kernel(4)
    assert k.dense() == [0, Fraction(1, 2), Fraction(-1, 3), Fraction(1, 4), Fraction(-1, 5)]


def test_log_shift_ratio_of_linear():
    # ln(x/(x+1)) = -ln(1 + 1/x)
    s = log_shift_ratio_poly(Poly.x(), 8)
    assert s == log1p_linear(1, 8).scale(-1)


def test_log_shift_ratio_of_constant_vanishes():
    assert series_order(log_shift_ratio_poly(Poly((5,)), 6)) is BEYOND_TRUNCATION


def test_log_shift_ratio_ratfn_is_difference():
    p, q = Poly((1, 2, 1)), Poly((Fraction(1, 4), 1))
    r = RationalFunction(p, q)
    assert log_shift_ratio_ratfn(r, 8) == log_shift_ratio_poly(p, 8) - log_shift_ratio_poly(q, 8)
