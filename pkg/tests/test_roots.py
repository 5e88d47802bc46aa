from __future__ import annotations

import pytest

from amenable_kit import expr as ex
from amenable_kit.refnum import INF, mp
from amenable_kit.roots import natural_domain, zero_locus


def test_sin_zeros():
    z = zero_locus(ex.parse("sin(x)"), "(1, 10)")
    assert len(z.roots) == 3
    for k, r in enumerate(z.roots, start=1):
        assert abs(r - k * mp.pi) < 1e-40
    assert z.resolution_ok


def test_double_root_is_found():
    z = zero_locus(ex.parse("(x - 2)^2"), "(0, 5)")
    assert any(abs(r - 2) < 1e-12 for r in z.roots)


def test_no_zeros():
    assert zero_locus(ex.parse("exp(x)"), "(-5, 5)").is_empty


@pytest.mark.parametrize(
    "text, within, want",
    [
        ("log(x)", "(-inf, inf)", [(0, INF)]),
        ("1/(x - 2)", "(0, 5)", [(0, 2), (2, 5)]),
        ("sqrt(x - 1)", "(-inf, inf)", [(1, INF)]),
        ("acosh(x)", "(-inf, inf)", [(1, INF)]),
    ],
)
def test_natural_domain(text, within, want):
    got = [(iv.lo.value, iv.hi.value) for iv in natural_domain(ex.parse(text), within).components()]
    assert got == want


def test_tan_poles():
    nd = natural_domain(ex.parse("tan(x)"), "(0, 4)")
    (a, b), (c, d) = [(iv.lo.value, iv.hi.value) for iv in nd.components()]
    assert a == 0 and d == 4
    assert abs(b - mp.pi / 2) < 1e-30 and abs(c - mp.pi / 2) < 1e-30


def test_gamma_poles():
    nd = natural_domain(ex.parse("gamma(x)"), "(-3.5, 2)")
    cuts = [iv.hi.value for iv in nd.components()][:-1]
    assert [round(float(c), 12) for c in cuts] == [-3, -2, -1, 0]
