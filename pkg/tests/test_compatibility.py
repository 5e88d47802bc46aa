from __future__ import annotations

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from amenable_kit import expr as ex
from amenable_kit.compatibility import A_ratio, B_ratio, check_compatible, ratio_point
from amenable_kit.refnum import INF, mpf

P = ex.parse


def test_powers_give_five_sevenths():
    r = check_compatible(P("x^2"), P("x^3"), "(0, inf)")
    assert r.verdict == "supported"
    assert abs(r.sup_A - mpf(5) / 7) < 1e-40


def test_exp_of_exp_is_refuted_with_a_growing_witness():
    r = check_compatible(P("exp(x)"), P("exp(x)"), "(-inf, inf)")
    assert r.verdict == "refuted"
    As = [a for _, a in r.witness]
    assert len(As) >= 6 and As[-1] > 1000 * As[0]


def test_identity_outer_function():
    r = check_compatible(P("x"), P("sin(x) + 2"), "(0, 10)")
    assert r.verdict == "supported"
    assert r.sup_A <= 1 + mpf("1e-30")


def test_case_two_and_four():
    # x = 0 gives kappa_h = 0: A = kappa_g / 1 with the convention kappa(.,0) = 0
    p = ratio_point(P("x + 1"), P("x"), 0)
    assert p.case in (1, 2, 3)
    # h(x) on the zero locus of g: kappa_g infinite, so is kappa(g o h)
    p = ratio_point(P("x - 1"), P("x^2"), 1)
    assert p.k_g == INF and p.k_gh == INF and p.A == 1


OUTER = ["x^2", "exp(x)", "log(x)", "atan(x)", "x^0.5", "x + 3"]
INNER = ["x^3 + 1", "exp(x)", "2 + sin(x)", "x^2 + 0.5"]


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(OUTER), st.sampled_from(INNER), st.floats(0.01, 3))
def test_case_three_identity(g, h, x):
    try:
        p = ratio_point(P(g), P(h), x)
    except (ex.DomainViolation, ValueError):
        assume(False)
    assert p.case != 4
    if p.case == 3:
        assert abs(p.B - (1 + p.A)) <= mpf("1e-10") * (1 + p.A)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(OUTER), st.sampled_from(INNER), st.floats(0.01, 3))
def test_ratios_are_nonnegative(g, h, x):
    try:
        a, b = A_ratio(P(g), P(h), x), B_ratio(P(g), P(h), x)
    except (ex.DomainViolation, ValueError):
        assume(False)
    assert a >= 0 and b >= 1 - mpf("1e-30")


def test_logarithmic_divergence_is_caught():
    # kappa(cosh, asinh x) ~ log(2x) while kappa of the composition tends to 1
    r = check_compatible(P("cosh(x)"), P("asinh(x)"), "(0, inf)")
    assert r.verdict == "refuted"


def test_slow_convergence_is_not_divergence():
    from amenable_kit.compatibility import _diverges

    assert not _diverges([mpf(3) - mpf(1) / j**2 for j in range(1, 41)])
    assert _diverges([mpf(j) / 3 for j in range(1, 41)])
