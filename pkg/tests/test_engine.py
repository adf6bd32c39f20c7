from fractions import Fraction

import mpmath
import pytest

from mcfrac import oracle
from mcfrac.algebra import Poly
from mcfrac.engine import (
    FunctionSpec,
    SpecError,
    approx_value,
    extend,
    initial_state,
    mt_series,
    rate_of_convergence,
    relative_error,
    run_corrections,
    solve_phi0,
    theta0,
)
from mcfrac.series import series_order

Q = Fraction
BROUNCKER = FunctionSpec(((Q(1, 2), 2), (Q(1), -2)), label="brouncker")


@pytest.mark.parametrize("kwargs, fragment", [
    (dict(gamma_factors=((Q(1, 2), 1), (Q(1), -2))), "does not cancel"),
    (dict(gamma_factors=((Q(1, 2), 1), (Q(0), -1))), "nonzero integer"),
    (dict(gamma_factors=((Q(1), -6),), stirling_power=6), "must declare"),
    (dict(gamma_factors=((Q(1, 2), 2), (Q(1), -2)), nu=2), "declared nu"),
    (dict(gamma_factors=((Q(1, 2), 2), (Q(1), -2)), prefactor=-1), "positive"),
    (dict(gamma_factors=((Q(1, 2), 2), (Q(1), -2)), pi_power=1), "pi"),
])
def test_spec_validation(kwargs, fragment):
    with pytest.raises(SpecError, match=fragment):
        FunctionSpec(**kwargs)


def test_derived_nu_and_c():
    s = FunctionSpec(((Q(1, 4), 4), (Q(1), -4)))
    assert (s.nu, s.c, s.degree, s.orientation) == (3, 1, 3, 1)
    r = s.reciprocal()
    assert (r.nu, r.orientation, r.degree) == (-3, -1, 3)


def test_phi0_brouncker():
    assert solve_phi0(BROUNCKER) == Poly((Q(1, 4), 1))


def test_phi0_makes_mt_vanish_to_order():
    st = initial_state(BROUNCKER)
    mt = mt_series(BROUNCKER, st, 12)
    assert mt.order == series_order(mt.series) == 3


def test_brouncker_ladder():
    st = run_corrections(BROUNCKER, 5)
    assert st.cf_type == "I"
    assert st.kappas() == [Q(1, 32), Q(9, 64), Q(25, 64), Q(49, 64), Q(81, 64)]
    assert st.lambdas() == [Q(1, 4)] * 5
    assert st.stopped is None


@pytest.mark.parametrize("k, K", [(0, 3), (1, 5), (2, 7), (3, 9)])
def test_brouncker_rates(k, K):
    st = run_corrections(BROUNCKER, 3).truncated(k)
    assert rate_of_convergence(BROUNCKER, st) == K


def test_theta0():
    st = run_corrections(BROUNCKER, 3)
    assert theta0(BROUNCKER, [st.truncated(j) for j in range(4)]) == 0


def test_extend_equals_longer_run():
    short = run_corrections(BROUNCKER, 2)
    assert extend(BROUNCKER, short, 2).layers == run_corrections(BROUNCKER, 4).layers


def test_reciprocal_orientation_gives_same_ladder():
    st = run_corrections(BROUNCKER.reciprocal(), 3)
    assert st.kappas() == [Q(1, 32), Q(9, 64), Q(25, 64)]
    with mpmath.workprec(300):
        assert relative_error(BROUNCKER.reciprocal(), st, 100) < 0
        assert relative_error(BROUNCKER, run_corrections(BROUNCKER, 3), 100) > 0


def test_approx_value_tracks_oracle():
    st = run_corrections(BROUNCKER, 4)
    with mpmath.workprec(300):
        for x in (10, 50):
            f = oracle.eval_f(BROUNCKER, x)
            assert abs(approx_value(BROUNCKER, st, x) / f - 1) < mpmath.mpf(x) ** -10


def test_type_two_escalation():
    spec = FunctionSpec(((Q(1, 3), 3), (Q(1), -3)))
    st = run_corrections(spec, 2)
    assert st.cf_type == "II"
    assert st.phi0 == Poly((Q(2, 27), Q(1, 3), 1))
    assert st.kappas()[0] == Q(-4, 729)


def test_exact_function_stops():
    # Gamma(x)/Gamma(x+1) = 1/x is reproduced by Phi0 alone
    spec = FunctionSpec(((Q(0), 1), (Q(1), -1)))
    st = run_corrections(spec, 3)
    assert st.phi0 == Poly((0, 1))
    assert st.k == 0 and st.stopped
    assert rate_of_convergence(spec, st) is None


def test_negative_k_rejected():
    with pytest.raises(ValueError):
        run_corrections(BROUNCKER, -1)
