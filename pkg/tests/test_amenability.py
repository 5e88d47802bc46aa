from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amenable_kit import expr as ex
from amenable_kit.amenability import (
    C_SWEEP,
    ComponentError,
    amenability_report,
    check_definition_direct,
    check_item1,
    check_item2,
    combine_union,
    combine_verdicts,
    extends_across,
    falsify_ball_escape,
    select_proposition,
)
from amenable_kit.intervals import Interval, parse_domain
from amenable_kit.refnum import mp

P = ex.parse


def comp(text):
    return parse_domain(text).components()[0]


@pytest.mark.parametrize(
    "dom, name, reflected",
    [
        ("(1, 2)", "ab-bounded", False),
        ("(1, inf)", "a-inf", False),
        ("(0, 3)", "zero-b", False),
        ("(0, inf)", "zero-inf", False),
        ("(-inf, -2)", "a-inf", True),
        ("(-5, 0)", "zero-b", True),
    ],
)
def test_proposition_selection(dom, name, reflected):
    c = select_proposition(comp(dom))
    assert (c.name, c.reflected) == (name, reflected)


def test_component_across_zero_is_rejected():
    with pytest.raises(ComponentError):
        select_proposition(Interval.of(-1, 1))


def test_domains_split_at_zero():
    assert [c.render() for c in parse_domain("(-1, 1)").components()] == ["(-1, 0)", "(0, 1)"]


def test_extends_across():
    assert extends_across(P("sin(x)"), mp.pi)
    assert not extends_across(P("log(x)"), 0)


def test_verdict_combination():
    assert combine_verdicts(["supported", "supported"]) == "supported"
    assert combine_verdicts(["supported", "inconclusive"]) == "inconclusive"
    assert combine_verdicts(["inconclusive", "refuted"]) == "refuted"


@pytest.mark.parametrize(
    "text, dom",
    [("exp(x)", None), ("sin(x)", "(0, pi)"), ("tan(x)", "(-pi/2, pi/2)"), ("x^2 - 1", None), ("log(x)", None)],
)
def test_supported(text, dom):
    assert amenability_report(P(text), dom).overall == "supported"


def test_sin_on_the_line_fails_both_items():
    rep = amenability_report(P("sin(x)"), "(-inf, inf)")
    assert rep.overall == "refuted"
    assert rep.failed_items == [1, 2]


def test_sqrt_shift_escapes_its_balls():
    rep = amenability_report(P("1 + sqrt(x - 1)"), "(1, inf)")
    assert rep.overall == "refuted"
    (c,) = rep.components
    for C in C_SWEEP:
        w = c.witnesses[C]
        assert w.reason == "ball leaves the domain" and w.y < 1


def test_union_is_amenable_iff_every_piece_is():
    a = amenability_report(P("tan(x)"), "(-pi/2, pi/2)")
    b = amenability_report(P("tan(x)"), "(pi/2, 3*pi/2)")
    assert combine_union([a, b]).overall == "supported"
    c = amenability_report(P("sin(x)"), "(-inf, inf)")
    assert combine_union([a, c]).overall == "refuted"


def test_item_wrappers():
    c = comp("(0, inf)")
    r1 = check_item1(P("x^3 + 1"), c)
    r2 = check_item2(P("x^3 + 1"), c)
    assert all(r.ok for r in r1 + r2)


def test_ball_escape_needs_a_finite_end():
    assert falsify_ball_escape(P("exp(x)"), comp("(0, inf)")) == {}


AMENABLE = [("exp(x)", 0.01, 30), ("atan(x)", 0.01, 50), ("x^3 + 2", 0.01, 30), ("log(x)", 1.5, 100)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(AMENABLE), st.floats(0, 1))
def test_definition_holds_at_large_C(case, s):
    text, lo, hi = case
    x = lo * (hi / lo) ** s
    dom = "(1, inf)" if text == "log(x)" else "(0, inf)"
    assert check_definition_direct(P(text), comp(dom), 10**4, [x]) == []
