from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amenable_kit import expr as ex
from amenable_kit.autodiff import central_differences, eval_jet2
from amenable_kit.refnum import mp, mpf

CASES = [
    ("x^3", 2, 12, 12),
    ("exp(2*x)", 0, 2, 4),
    ("sin(x)", 0, 1, 0),
    ("log(x)", 2, 0.5, -0.25),
    ("1/x", 2, -0.25, 0.25),
    ("sqrt(x)", 4, 0.25, -1 / 32),
    ("atan(x)", 1, 0.5, -0.5),
]


@pytest.mark.parametrize("text, x, d1, d2", CASES)
def test_closed_forms(text, x, d1, d2):
    j = eval_jet2(ex.parse(text), x)
    assert abs(j.d1 - d1) < 1e-40 and abs(j.d2 - d2) < 1e-40


def test_special_functions():
    j = eval_jet2(ex.parse("gamma(x)"), 1)
    assert abs(j.d1 + mp.euler) < 1e-40
    j = eval_jet2(ex.parse("digamma(x)"), 1)
    assert abs(j.d1 - mp.pi**2 / 6) < 1e-40
    assert abs(j.d2 + 2 * mp.zeta(3)) < 1e-40


def test_jet_of_pow_needs_positive_base():
    with pytest.raises(ex.DomainViolation):
        eval_jet2(ex.parse("x^0.5"), -1)


FUNCS = ["x^3 - 2*x + 1", "exp(sin(x))", "log(1 + x^2)", "x*atan(x)", "cosh(x)/(2 + sinh(x)^2)", "asinh(x)^2"]


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(FUNCS), st.floats(-4, 4).filter(lambda v: abs(v) > 1e-3))
def test_jets_match_finite_differences(text, x):
    f = ex.parse(text)
    j = eval_jet2(f, x)
    c1, c2 = central_differences(f, x)
    assert abs(j.d1 - c1) <= mpf("1e-6") * (1 + abs(j.d1))
    assert abs(j.d2 - c2) <= mpf("1e-4") * (1 + abs(j.d2))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FUNCS), st.sampled_from(FUNCS), st.floats(-2, 2))
def test_product_rule(a, b, x):
    fa, fb = ex.parse(a), ex.parse(b)
    ja, jb = eval_jet2(fa, x), eval_jet2(fb, x)
    jp = eval_jet2(ex.Mul(fa, fb), x)
    assert abs(jp.d1 - (ja.d1 * jb.v + ja.v * jb.d1)) <= mpf("1e-35") * (1 + abs(jp.d1))
    assert abs(jp.d2 - (ja.d2 * jb.v + 2 * ja.d1 * jb.d1 + ja.v * jb.d2)) <= mpf("1e-35") * (1 + abs(jp.d2))
