from __future__ import annotations

import os

from hypothesis import given, settings
from hypothesis import strategies as st

from amenable_kit import expr as ex
from amenable_kit import stability as stab
from amenable_kit.refnum import INF, mpf

P = ex.parse


def test_sample_points_are_reproducible_and_inside():
    a = stab.sample_points("(0.1, 10) U (-3, -1)", 20, seed=4)
    assert a == stab.sample_points("(0.1, 10) U (-3, -1)", 20, seed=4)
    assert all(0.1 < x < 10 or -3 < x < -1 for x in a)


def test_forward_exp_is_bounded():
    v = stab.forward_profile(P("exp(x)"), "(-10, 10)", None, range(8, 25), 32, 0)
    assert v.holds and v.estimated_C <= 10


def test_forward_sin_log_is_bounded():
    v = stab.forward_profile(P("sin(log(x))"), "(0.1, 10)", None, range(8, 25), 32, 0)
    assert v.holds and v.estimated_C != INF


def test_identity_is_backward_stable_with_constant_one():
    v = stab.backward_check(P("x"), "(-10, 10)", None, (8, 16, 24), 32, 0)
    assert v.holds and v.estimated_C <= 1


def test_square_is_backward_stable():
    s = stab.backward_sample(P("x^2"), 3, 10)
    assert s.status == "ok" and s.ratio <= 1


def test_thread_cap_does_not_change_results(monkeypatch):
    a = stab.forward_profile(P("atan(x)"), "(0, 5)", None, (8, 16), 16, 1)
    monkeypatch.setenv("AMENABLE_KIT_THREADS", "4")
    b = stab.forward_profile(P("atan(x)"), "(0, 5)", None, (8, 16), 16, 1)
    assert a.estimated_C == b.estimated_C
    assert [s.ratio for s in a.samples] == [s.ratio for s in b.samples]


FUNCS = ["exp(x)", "x^3", "log(x)", "atan(x)", "sin(x)", "x^0.5", "1/(x + 1)", "cosh(x)"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FUNCS), st.floats(0.05, 3), st.integers(6, 24))
def test_backward_implies_mixed(text, x, t):
    f = P(text)
    b = stab.backward_sample(f, x, t, "(0, inf)")
    m = stab.mixed_sample(f, x, t, "(0, inf)", back=b)
    if b.status == "ok":
        assert m.status == "ok" and m.ratio <= b.ratio + mpf("1e-20")


def test_composed_evaluator_for_compatible_pair():
    r = stab.composition_experiment(P("x^2"), P("x^3"), "(0.1, 10)", ts=range(8, 25), n=32)
    assert r.hypotheses_met and r.bounded


def test_exp_of_exp_fails_the_hypotheses():
    r = stab.composition_experiment(P("exp(x)"), P("exp(x)"), "(-inf, inf)", ts=(8, 16, 24), n=16)
    assert not r.hypotheses_met
    assert any("compatibility" in n for n in r.hypothesis_notes)


def test_env_var_parsing(monkeypatch):
    monkeypatch.setenv("AMENABLE_KIT_THREADS", "nonsense")
    assert stab._threads() == 1
    monkeypatch.delenv("AMENABLE_KIT_THREADS", raising=False)
    assert stab._threads() == 1 or os.environ.get("AMENABLE_KIT_THREADS")
