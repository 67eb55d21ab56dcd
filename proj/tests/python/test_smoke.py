import math

import pytest

import kahan


def test_polynomial_arithmetic_and_text():
    p = kahan.Polynomial("x1 + a")
    q = kahan.Polynomial("x1 - a")
    assert p * q == kahan.Polynomial("x1^2 - a^2")
    assert str(kahan.Polynomial("x1'^2 + _x1")) == "x1'^2 + _x1"
    assert (p ** 2).total_degree() == 2
    assert p.derivative("x1") == kahan.Polynomial("1")
    assert kahan.Polynomial("x1^2 + a").evaluate({"x1": "1/2", "a": "0.25"}) == "1/2"


def test_symmetrize_kahan_rule():
    assert kahan.Polynomial(kahan.symmetrize("x1*x2", 1)) == kahan.Polynomial("(x1*x2' + x1'*x2)/2")


def test_discretize_lotka_volterra():
    eqs = kahan.discretize(1, ["alpha*x1*(1 - x2)", "x2*(x1 - 1)"])
    want = kahan.Polynomial("x1' - x1 - h*alpha/2*(x1*(1 - x2') + x1'*(1 - x2))")
    assert kahan.Polynomial(eqs[0]) == want


def test_orbit_and_darboux():
    rhs = ["-a*x1^3 - b*x1^2 - c*x1 - d"]
    params = {"a": "1", "b": "2", "c": "3", "d": "5"}
    o = kahan.orbit(2, rhs, [0.3, 0.31], "0.1", 50, params)
    assert o["status"] == "complete"
    assert len(o["points"]) == 51
    assert all(math.isfinite(v) for p in o["points"] for v in p)
    certs = kahan.darboux(2, rhs, "1/10", 4, params)
    assert len(certs) == 2


def test_beam_spectrum():
    s = kahan.beam_spectrum("1", "1/4", "1/10", "lagrangian")
    assert s["pattern_ok"]
    assert s["palindromic_defect"] <= 1e-8
    assert s["w_star"] == pytest.approx(math.sqrt(1.5))
    assert s["continuous_gamma"] == pytest.approx(6 ** 0.125)


def test_run_preset(tmp_path):
    text = kahan.run("orbit", preset="lv", out=tmp_path)
    assert "status: complete" in text
    assert (tmp_path / "orbit.csv").exists()
    assert "lv" in kahan.presets


def test_errors_raise_kahan_error():
    with pytest.raises(kahan.KahanError, match="ParseError"):
        kahan.Polynomial("x1 + * 2")
    with pytest.raises(kahan.KahanError, match="DegreeTooHigh"):
        kahan.discretize(1, ["x1^3"])
    with pytest.raises(kahan.KahanError):
        kahan.run("orbit", preset="nope")
