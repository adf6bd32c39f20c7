from fractions import Fraction

import pytest

from mcfrac.specfile import SpecLoadError, bundled_names, eval_rational, load_spec, parse_spec_text

Q = Fraction


def test_bundled_specs_load():
    names = bundled_names()
    assert {"brouncker", "ramanujan", "example1", "gamma3_13", "gamma3_23", "g_eta"} <= set(names)
    for name in names:
        assert load_spec(name).spec.nu


def test_eval_rational():
    assert eval_rational("1 - eta", {"eta": Q(1, 3)}) == Q(2, 3)
    assert eval_rational("(1/2)^3") == Q(1, 8)
    with pytest.raises(SpecLoadError, match="p/q"):
        eval_rational("0.5")
    with pytest.raises(SpecLoadError, match="unknown name"):
        eval_rational("zeta")
    with pytest.raises(SpecLoadError, match="division"):
        eval_rational("1/0")


def test_parameter_override():
    sf = load_spec("g_eta", {"eta": Q(1, 4)})
    assert sf.params["eta"] == Q(1, 4)
    assert (Q(1, 4), 1) in sf.spec.gamma_factors


@pytest.mark.parametrize("text, fragment", [
    ("label = x\n", "missing field 'gamma'"),
    ("gamma = 1/2:2, 1:-2\nfoo = 1\n", "unknown field"),
    ("gamma = 1/2:2 1:-2\n", "gamma shift"),
    ("gamma = 1/2, 1:-1\n", "shift:exponent"),
    ("gamma = 1/2:2, 1:-3\n", "does not cancel"),
    ("gamma = 0.5:2, 1:-2\n", "p/q"),
    ("gamma = 1/2:2, 1:-2\nk_max = 1/2\n", "k_max"),
    ("gamma = 1/2:2, 1:-2\nprefactor = 2\nc = 1\n", "not within 1%"),
    ("just words\n", "key = value"),
])
def test_load_errors_name_the_field(text, fragment):
    with pytest.raises(SpecLoadError, match=fragment):
        parse_spec_text(text)


def test_unknown_override_and_spec():
    with pytest.raises(SpecLoadError):
        load_spec("brouncker", {"eta": Q(1, 2)})
    with pytest.raises(SpecLoadError, match="unknown spec"):
        load_spec("nosuch")
    with pytest.raises(SpecLoadError, match="no such spec file"):
        load_spec("missing.spec")


def test_spec_from_path(tmp_path):
    p = tmp_path / "quarter.spec"
    p.write_text("# comment\ngamma = 1/4:4, 1:-4\nk_max = 2\ngrid = 10, 20, 40, 80\n")
    sf = load_spec(str(p))
    assert sf.label == "quarter" and sf.k_max == 2
    assert sf.grid == (10, 20, 40, 80)
