from fractions import Fraction

import pytest

from mcfrac.closedform import parse
from mcfrac.engine import FunctionSpec, run_corrections
from mcfrac.guess import (
    ODD,
    extract_common_factor,
    fit_parity_form,
    fit_recurrence_const_rhs,
    guess_general_term,
    layer_sequence,
    modular_decompose,
    verify_guess,
)

Q = Fraction


def test_extract_common_factor():
    factor, reduced = extract_common_factor([Q(-1, 32), Q(-9, 64), Q(-25, 64)])
    assert factor == Q(-1, 64)
    assert reduced == [2, 9, 25]
    with pytest.raises(ValueError):
        extract_common_factor([Q(1), Q(0)])


@pytest.mark.parametrize("seq, order", [([1, 9, 25, 49, 81, 121], 2), ([5] * 6, 1), ([m**3 - m for m in range(8)], 3)])
def test_fit_recurrence(seq, order):
    rhs, form = fit_recurrence_const_rhs(seq, order)
    assert all(form(m) == v for m, v in enumerate(seq))


def test_fit_recurrence_rejects_higher_degree():
    assert fit_recurrence_const_rhs([m**4 for m in range(8)], 3) is None


def test_parity_form():
    seq = [(m + 1 + m // 2) for m in range(10)]
    form = fit_parity_form(seq)
    assert all(form(m) == v for m, v in enumerate(seq))


def test_modular_decompose():
    seq = [ODD(m) ** 2 * (m + 1) + m for m in range(6)]
    q, r = modular_decompose(seq, ODD**2)
    assert q == [m + 1 for m in range(6)]
    assert r == list(range(6))


def test_guess_polynomial_over_odd_square():
    seq = [Q((m + 1) ** 2, (2 * m + 1) ** 2) for m in range(8)]
    rep = guess_general_term(seq)
    assert rep.found and rep.start == 0
    assert all(rep.form(m) == Q((m + 1) ** 2, (2 * m + 1) ** 2) for m in range(30))


def test_guess_skips_exceptional_first_term():
    seq = [Q(1, 32)] + [Q((2 * m + 1) ** 2, 64) for m in range(1, 8)]
    rep = guess_general_term(seq)
    assert rep.start == 1
    assert rep.notes


def test_guess_zero_sequence():
    rep = guess_general_term([0] * 6)
    assert rep.found and rep.form(17) == 0


def test_guess_negative_control():
    seq = [Q(1), Q(7, 3), Q(-2, 11), Q(19, 5), Q(3, 101), Q(-17, 4), Q(5, 9)]
    assert guess_general_term(seq).render() == "no pattern found"


def test_guess_needs_enough_terms():
    with pytest.raises(ValueError):
        guess_general_term([1, 2, 3])


def test_verify_guess_accepts_and_rejects():
    spec = FunctionSpec(((Q(1, 2), 2), (Q(1), -2)))
    st = run_corrections(spec, 6)
    rep = guess_general_term(layer_sequence(st, "kappa"))
    ok = verify_guess(spec, st, rep, 2)
    assert ok.verified and ok.verification_depth == 7
    wrong = rep.__class__(sequence=rep.sequence, start=1, form=parse("1/64*(2*m + 1)^2 + m*(m-1)*(m-2)*(m-3)*(m-4)*(m-5)*(m-6)"),
                          source="kappa")
    assert not verify_guess(spec, st, wrong, 2).verified
    assert not verify_guess(spec, st, rep, 1).verified
