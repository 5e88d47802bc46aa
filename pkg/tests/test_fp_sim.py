from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amenable_kit import expr as ex
from oracles import oracle_round

from amenable_kit.fp_sim import FpSystem, NoOutput, delta_of, eval_in_fp, fp_op, representable, round_fl


def test_examples():
    s = FpSystem(3)
    assert round_fl(s, 9).to_fraction() == 8
    assert round_fl(s, 11).to_fraction() == 10
    assert round_fl(s, 13).to_fraction() == 12
    assert round_fl(s, -9).to_fraction() == -8
    assert round_fl(s, Fraction(15, 2)).to_fraction() == 7  # below 8: spacing 1, 7.5 -> 7
    assert round_fl(FpSystem(24), 0).is_zero


def test_precision_must_be_two_or_more():
    with pytest.raises(ValueError):
        FpSystem(1)


fractions = st.fractions(min_value=-(10**12), max_value=10**12).filter(lambda q: q != 0)


@settings(max_examples=400)
@given(fractions, st.integers(2, 40))
def test_matches_oracle_and_unit_roundoff(x, t):
    s = FpSystem(t)
    r = round_fl(s, x)
    assert r.to_fraction() == oracle_round(x, t)
    assert abs(delta_of(x, r)) <= s.u


@settings(max_examples=200)
@given(fractions, fractions, st.sampled_from("+-*/"), st.integers(2, 32))
def test_operations_are_exactly_rounded(a, b, op, t):
    s = FpSystem(t)
    fa, fb = round_fl(s, a), round_fl(s, b)
    va, vb = fa.to_fraction(), fb.to_fraction()
    exact = {"+": va + vb, "-": va - vb, "*": va * vb, "/": va / vb}[op]
    out, delta = fp_op(s, op, fa, fb)
    assert out.to_fraction() == oracle_round(exact, t)
    assert abs(delta) <= s.u
    if exact != 0:
        assert out.to_fraction() == exact * (1 + delta)


def test_rounding_is_idempotent_on_representables():
    s = FpSystem(4)
    for v in representable(s, -3, 5):
        assert round_fl(s, v).to_fraction() == v


def test_division_by_zero_is_no_output():
    s = FpSystem(8)
    with pytest.raises(NoOutput):
        fp_op(s, "/", round_fl(s, 1), round_fl(s, 0))


def test_expression_evaluation_traces_every_operation():
    s = FpSystem(10)
    v, tr = eval_in_fp(s, ex.parse("x*x + 1"), 3)
    assert v.to_fraction() == 10
    assert len(tr.records) >= 2
    assert all(abs(r.delta) <= s.u for r in tr.records)


def test_random_operation_sweep():
    rng = random.Random(7)
    for _ in range(2000):
        t = rng.randint(2, 32)
        x = Fraction(rng.randint(1, 2**40), rng.randint(1, 2**20)) * rng.choice((1, -1))
        r = round_fl(FpSystem(t), x)
        assert abs(r.to_fraction() - x) <= abs(x) * Fraction(1, 2**t)
