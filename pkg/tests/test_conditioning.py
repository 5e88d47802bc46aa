from __future__ import annotations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from amenable_kit import expr as ex
from amenable_kit.conditioning import G_value, H_value, composition_kappa_check, cond_report, inf_safe_ratio, kappa, mu
from amenable_kit.refnum import INF, mp, mpf


def test_exp_at_two():
    r = cond_report(ex.parse("exp(x)"), 2)
    assert r.kappa == 2 and r.mu == 3
    assert abs(r.H - mpf(4) / 5) < 1e-45
    assert abs(r.G - mpf(2) / 5) < 1e-45


def test_kappa_at_zero_and_on_zero_locus():
    assert kappa(ex.parse("sin(x)"), 0) == 0
    assert kappa(ex.parse("x - 1"), 1) == INF
    assert mu(ex.parse("x - 1"), 1) == INF


def test_power_law():
    # kappa(x^a) = |a| and H = a(a-1)/(1+a^2)
    for a in ("0.5", "1.5", "-2", "3"):
        f = ex.parse(f"x^{a}")
        al = mpf(a)
        assert abs(kappa(f, mpf("2.7")) - abs(al)) < 1e-40
        assert abs(H_value(f, mpf("2.7")) - al * (al - 1) / (1 + al**2)) < 1e-40


def test_log_H():
    # f = log x: H = -log(x) / (log(x)^2 + 1)
    x = mpf(5)
    L = mp.log(x)
    assert abs(H_value(ex.parse("log(x)"), x) + L / (L**2 + 1)) < 1e-40


def test_G_closed_forms():
    # powers: x f f' + x^2 f f'' - x^2 f'^2 vanishes identically
    for a in ("0.5", "-2", "3"):
        assert abs(G_value(ex.parse(f"x^{a}"), mpf("1.9"))) < 1e-40
    # log: G = -1 / (1 + log(x)^2)
    x = mpf(7)
    assert abs(G_value(ex.parse("log(x)"), x) + 1 / (1 + mp.log(x) ** 2)) < 1e-40


def test_inf_safe_ratio():
    assert inf_safe_ratio(INF, INF) == 1
    assert inf_safe_ratio(1, INF) == 0
    assert inf_safe_ratio(INF, 2) == INF


OUTER = ["exp(x)", "x^3", "sin(x)", "log(x)", "atan(x)", "x^0.5", "cosh(x)"]
INNER = ["x^2 + 1", "exp(x)", "2 + sin(x)", "x^4", "asinh(x) + 3"]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(OUTER), st.sampled_from(INNER), st.floats(-3, 3))
def test_chain_rule_property(g, h, x):
    assume(abs(x) > 1e-6)
    try:
        c = composition_kappa_check(ex.parse(g), ex.parse(h), x)
    except (ex.DomainViolation, ValueError, ZeroDivisionError):
        assume(False)
    assert c.bound_holds
    if c.equality_applies:
        assert c.rel_gap <= mpf("1e-10")


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(OUTER + INNER), st.floats(0.05, 4))
def test_mu_at_least_one(text, x):
    try:
        assert mu(ex.parse(text), x) >= 1
    except ex.DomainViolation:
        pass


def test_report_fields_are_consistent():
    r = cond_report(ex.parse("tan(x)"), mpf("0.4"))
    assert r.mu == 1 + r.kappa
    with pytest.raises(ex.DomainViolation):
        cond_report(ex.parse("log(x)"), -2)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["x^2", "exp(x)", "sin(x) + 2", "atan(x)", "log(x)"]), st.floats(0.2, 3))
def test_G_matches_finite_differences_of_kappa(text, x):
    # G = x * d/dx(k) / (1 + k^2) with k = x f'/f (signed)
    f = P_(text)
    x = mpf(x)
    from amenable_kit.autodiff import eval_jet2

    def k(v):
        j = eval_jet2(f, v)
        return v * j.d1 / j.v

    assume(abs(ex.evaluate(f, x)) > 1e-6)
    h = mpf("1e-25") * x
    fd = x * (k(x + h) - k(x - h)) / (2 * h) / (1 + k(x) ** 2)
    assert abs(G_value(f, x) - fd) <= mpf("1e-20") * (1 + abs(fd))


P_ = ex.parse
