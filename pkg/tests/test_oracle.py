from fractions import Fraction

import mpmath
import pytest

from mcfrac import oracle
from mcfrac.engine import FunctionSpec

Q = Fraction


@pytest.mark.parametrize("n, value", [(0, Q(1)), (1, Q(-1, 2)), (2, Q(1, 6)), (3, Q(0)), (12, Q(-691, 2730))])
def test_bernoulli(n, value):
    assert oracle.bernoulli(n) == value


@pytest.mark.parametrize("x", [Q(1, 3), Q(1, 2), Q(1), Q(7, 2), Q(25), Q(1000)])
def test_ln_gamma_against_mpmath(x):
    with mpmath.workprec(300):
        ref = mpmath.loggamma(mpmath.mpf(x.numerator) / x.denominator)
        assert abs(oracle.ln_gamma(x) - ref) < mpmath.mpf(2) ** -240 * max(1, abs(ref))


def test_gamma_half():
    with mpmath.workprec(300):
        assert abs(oracle.gamma(Q(1, 2)) - mpmath.sqrt(mpmath.pi)) < mpmath.mpf(2) ** -240


def test_ln_gamma_rejects_nonpositive():
    with pytest.raises(ValueError):
        oracle.ln_gamma(0)


@pytest.mark.parametrize("n, exact", [
    (0, lambda: 1),
    (1, lambda: 2),
    (2, lambda: mpmath.pi),
    (3, lambda: 4 * mpmath.pi / 3),
    (4, lambda: mpmath.pi**2 / 2),
])
def test_unit_ball_volume(n, exact):
    with mpmath.workprec(280):
        assert abs(oracle.unit_ball_volume(n) - exact()) < mpmath.mpf(2) ** -240


def test_eval_f_gamma_ratio():
    spec = FunctionSpec(((Q(1, 2), 2), (Q(1), -2)))
    with mpmath.workprec(280):
        x = mpmath.mpf(3)
        ref = (mpmath.gamma(x + 0.5) / mpmath.gamma(x + 1)) ** 2
        assert abs(oracle.eval_f(spec, 3) / ref - 1) < mpmath.mpf(2) ** -230


def test_eval_f_stirling_type():
    # Gamma(x+1)^-6 (x/e)^(6x) 8 pi^3 tends to 1 / x^3
    spec = FunctionSpec(((Q(1), -6),), stirling_power=6, nu=3, c=1, prefactor=8, pi_power=3)
    with mpmath.workprec(280):
        x = mpmath.mpf(5)
        ref = 8 * mpmath.pi**3 * (x / mpmath.e) ** (6 * x) / mpmath.gamma(x + 1) ** 6
        assert abs(oracle.eval_f(spec, 5) / ref - 1) < mpmath.mpf(2) ** -230


def test_limit_check():
    ok, _ = oracle.limit_check(FunctionSpec(((Q(1, 4), 4), (Q(1), -4))))
    assert ok
    bad = FunctionSpec(((Q(1, 4), 4), (Q(1), -4)), prefactor=2, c=1)
    assert not oracle.limit_check(bad)[0]
