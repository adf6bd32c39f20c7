"""Randomized identities, 1000 cases per property."""

from fractions import Fraction

import mpmath
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from mcfrac import oracle
from mcfrac.algebra import Poly, RationalFunction, poly_divmod, poly_gcd, ratfn_collapse_cf
from mcfrac.closedform import equivalent, from_poly, parse
from mcfrac.contfrac import GeneralizedCF, convergent, eval_cf, nested_value
from mcfrac.series import AsymptoticSeries, log_shift_ratio_poly, series_log1p, series_log1p_mercator

N = 1000
prop = settings(max_examples=N, deadline=None, suppress_health_check=[HealthCheck.too_slow])

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=30)
positive = st.fractions(min_value=Fraction(1, 40), max_value=60, max_denominator=40)


@st.composite
def polys(draw, max_degree=4, nonzero=False):
    cs = draw(st.lists(rationals, min_size=1, max_size=max_degree + 1))
    p = Poly(cs)
    if nonzero and p.is_zero():
        p = Poly((1,))
    return p


@st.composite
def vanishing_series(draw, trunc=7):
    cs = draw(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=7), min_size=trunc, max_size=trunc))
    return AsymptoticSeries.from_dense([0] + cs, trunc, start=1)


def mpq(q):
    q = Fraction(q)
    return mpmath.mpf(q.numerator) / q.denominator


# --- exact algebra ------------------------------------------------------------------------


@prop
@given(polys(), rationals)
def test_shift_round_trip(p, h):
    assert p.shift(h).shift(-h) == p


@prop
@given(polys(), polys(nonzero=True))
def test_divmod_reconstructs(p, q):
    quo, rem = poly_divmod(p, q)
    assert quo * q + rem == p
    assert rem.is_zero() or rem.degree < q.degree


@prop
@given(polys(max_degree=3, nonzero=True), polys(max_degree=3, nonzero=True), polys(max_degree=2, nonzero=True))
def test_gcd_divides(a, b, c):
    g = poly_gcd(a * c, b * c)
    assert poly_divmod(a * c, g)[1].is_zero() and poly_divmod(b * c, g)[1].is_zero()
    if c.degree > 0:
        assert g.degree >= c.degree


@prop
@given(polys(nonzero=True), polys(nonzero=True), polys(nonzero=True), polys(nonzero=True))
def test_rational_function_field_ops(a, b, c, d):
    r, s = RationalFunction(a, b), RationalFunction(c, d)
    assert (r + s) - s == r
    assert (r * s) / s == r
    assert r.reduced() == r


@prop
@given(polys(max_degree=4))
def test_closed_form_round_trip(p):
    f = from_poly(p)
    assert all(f(m) == p(m) for m in range(8))
    assert equivalent(parse(f.render()), f)


# --- series -------------------------------------------------------------------------------


@prop
@given(vanishing_series(), vanishing_series())
def test_log_of_product(s, t):
    # ln(1+s) + ln(1+t) = ln((1+s)(1+t))
    lhs = series_log1p(s) + series_log1p(t)
    assert lhs == series_log1p(s + t + s * t)


@prop
@given(vanishing_series(trunc=6))
def test_log1p_recurrence_matches_mercator(s):
    assert series_log1p(s) == series_log1p_mercator(s)


@prop
@given(vanishing_series(), vanishing_series(), vanishing_series())
def test_product_commutes_and_associates(s, t, u):
    assert s * t == t * s
    assert (s * t) * u == s * (t * u)


@prop
@given(polys(max_degree=3, nonzero=True), polys(max_degree=3, nonzero=True))
def test_shift_ratio_is_additive(p, q):
    assert log_shift_ratio_poly(p * q, 8) == log_shift_ratio_poly(p, 8) + log_shift_ratio_poly(q, 8)


# --- continued fractions ----------------------------------------------------------------------


@st.composite
def positive_ladders(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    a = draw(st.lists(st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=20), min_size=n, max_size=n))
    b = draw(st.lists(st.fractions(min_value=Fraction(1, 2), max_value=10, max_denominator=20), min_size=n, max_size=n))
    b0 = draw(st.fractions(min_value=0, max_value=10, max_denominator=20))
    return b0, a, b


@prop
@given(positive_ladders())
def test_convergent_matches_nested_and_numeric(ladder):
    b0, a, b = ladder
    cf = GeneralizedCF(b0=b0, a=tuple(a), b=tuple(b))
    exact = nested_value(b0, list(zip(a, b)))
    assert convergent(cf, len(a))(Fraction(0)) == exact
    with mpmath.workprec(220):
        assert abs(eval_cf(cf, 0, len(a), 200) - mpq(exact)) <= mpmath.mpf(2) ** -180 * (1 + abs(mpq(exact)))


@prop
@given(positive_ladders(), st.fractions(min_value=1, max_value=30, max_denominator=10))
def test_collapse_matches_convergent(ladder, x):
    _, a, b = ladder
    phi0 = Poly((b[0], 1))
    layers = [(k, Poly((c, 1))) for k, c in zip(a, b)]
    cf = GeneralizedCF(b0=RationalFunction(phi0), a=tuple(k for k, _ in layers),
                       b=tuple(RationalFunction(d) for _, d in layers))
    assert ratfn_collapse_cf(phi0, layers)(x) == convergent(cf, len(layers))(x)


# --- ln gamma -------------------------------------------------------------------------------------

PREC = 192


@prop
@given(positive)
def test_ln_gamma_recurrence(x):
    with mpmath.workprec(PREC + 30):
        lhs = oracle.ln_gamma(x + 1, PREC)
        rhs = oracle.ln_gamma(x, PREC) + mpmath.log(mpq(x))
        assert abs(lhs - rhs) <= mpmath.mpf(2) ** (20 - PREC) * (1 + abs(lhs))


@prop
@given(positive)
def test_ln_gamma_duplication(x):
    # Gamma(x) Gamma(x + 1/2) = 2^(1 - 2x) sqrt(pi) Gamma(2x)
    with mpmath.workprec(PREC + 30):
        lhs = oracle.ln_gamma(x, PREC) + oracle.ln_gamma(x + Fraction(1, 2), PREC)
        rhs = (1 - 2 * mpq(x)) * mpmath.log(2) + mpmath.log(mpmath.pi) / 2 + oracle.ln_gamma(2 * x, PREC)
        assert abs(lhs - rhs) <= mpmath.mpf(2) ** (20 - PREC) * (1 + abs(lhs))
