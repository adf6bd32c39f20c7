import json
from fractions import Fraction

import mpmath
import pytest

from mcfrac import checks, oracle
from mcfrac.contfrac import eval_cf
from mcfrac.engine import run_corrections
from mcfrac.specfile import load_spec

Q = Fraction


def test_point_escalates_near_zero_margin():
    calls = []

    def margin(prec):
        calls.append(prec)
        return mpmath.mpf(2) ** (-prec + 2), ""

    pt = checks._point("tiny", {}, margin, 256)
    assert calls == [256, 512]
    assert pt.precision == 512 and pt.passed


def test_point_reports_failure_with_sign():
    pt = checks._point("bad", {"x": 1}, lambda p: (mpmath.mpf(-0.25), "why"), 256)
    assert not pt.passed and pt.margin == -0.25 and pt.detail == "why"


def test_report_rendering_and_records():
    rep = checks.VerificationReport("demo", ((1, 2),))
    rep.points.append(checks.CheckPoint("a", {"x": Q(1, 2)}, True, 0.5))
    rep.points.append(checks.CheckPoint("b", {"x": Q(3)}, False, -1.0))
    assert rep.verdict == "fail" and len(rep.failures()) == 1
    table = rep.summary_table()
    assert "sampled" in table and "FAIL" in table
    recs = rep.to_records()
    assert recs[-1]["kind"] == "summary" and recs[-1]["failed"] == 1
    assert json.loads(json.dumps(recs))[0]["params"]["x"] == "1/2"


def test_empty_report_does_not_pass():
    assert not checks.VerificationReport("empty", ()).passed


def test_corollary1_passes():
    assert checks.check_corollary1().passed


def test_theorem1_small_grid():
    rep = checks.check_theorem1(e0_grid=(6, 12), e1_grid=(9, 10))
    assert rep.passed
    assert {p.label for p in rep.points} == {"E0 lower x=6", "E0 lower x=12", "E0 upper x=12", "E1 lower x=9",
                                             "E1 lower x=10", "E1 upper x=10"}


def test_four_gamma_ratio_special_case():
    with mpmath.workprec(300):
        x = Q(5)
        ref = (mpmath.gamma(mpmath.mpf(6) / 4) / mpmath.gamma(mpmath.mpf(8) / 4)) ** 4
        assert abs(checks.four_gamma_ratio(x, 0, 0) / ref - 1) < mpmath.mpf(2) ** -240


def test_entry39_ladders_share_the_limit():
    with mpmath.workprec(300):
        a = eval_cf(checks.entry39_cf(Q(1, 4), Q(1, 2)), 20, 80)
        b = eval_cf(checks.single_ladder_cf(Q(1, 4), Q(1, 2)), 20, 40)
        p = checks.four_gamma_ratio(20, Q(1, 4), Q(1, 2))
        assert abs(a / p - 1) < mpmath.mpf(10) ** -30
        assert abs(b / p - 1) < mpmath.mpf(10) ** -30


def test_conjecture_rejects_bad_inputs():
    with pytest.raises(ValueError):
        checks.conjecture(3, Q(3, 2))
    with pytest.raises(ValueError):
        checks.conjecture(4)


def test_open_problem_two_small():
    rep = checks.check_open_problems(2, x_grid=(5,), engine_layers=6)
    assert rep.passed


def test_empirical_order_catches_wrong_K():
    sf = load_spec("brouncker")
    st = run_corrections(sf.spec, 1)
    slope, good = checks.empirical_order(sf.spec, st, sf.grid)
    assert good.passed and abs(slope + 5) < 0.1
    _, bad = checks.empirical_order(sf.spec, st, sf.grid, K=7)
    assert not bad.passed


def test_empirical_order_needs_four_points():
    sf = load_spec("brouncker")
    with pytest.raises(ValueError):
        checks.empirical_order(sf.spec, run_corrections(sf.spec, 1), (10, 20, 40))


def test_corollary3_truncations_bracket():
    spec = checks.FunctionSpec(((Q(1, 3), 3), (Q(2, 3), -3)))
    with mpmath.workprec(300):
        f = oracle.eval_f(spec, 2)
        assert checks.corollary3_truncation(2, 1) < f < checks.corollary3_truncation(2, 2)


def test_run_named_unknown():
    with pytest.raises(KeyError):
        checks.run_named("theorem99")


def test_open_problem_one_depth_profile():
    conj = checks.conjecture(1)
    with mpmath.workprec(300):
        f = oracle.eval_f(conj.spec, 2)
        err = {d: abs(eval_cf(conj.cf, Q(2) + conj.x_shift, d) / f - 1) for d in (20, 40)}
    assert err[20] < 1e-14
    assert err[40] < 1e-15
