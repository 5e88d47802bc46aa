from __future__ import annotations

import pytest

from amenable_kit.intervals import DomainSyntaxError, parse_domain, parse_endpoint
from amenable_kit.refnum import INF, mp


def test_endpoints():
    assert parse_endpoint("inf").value == INF
    assert parse_endpoint("-inf").value == -INF
    assert abs(parse_endpoint("-pi/2").value + mp.pi / 2) < 1e-45
    assert abs(parse_endpoint("3*pi + pi/2").value - 3.5 * mp.pi) < 1e-45


def test_union_and_membership():
    d = parse_domain("(0, 1) U (2, inf)")
    assert len(d.components()) == 2
    assert d.contains(0.5) and d.contains(1e9)
    assert not d.contains(1) and not d.contains(0) and not d.contains(1.5)
    assert d.render() == "(0, 1) U (2, inf)"


def test_closed_brackets_accepted_as_sampling_hint():
    d = parse_domain("[-10, 10]")
    assert d.contains(0)


@pytest.mark.parametrize("text", ["(1,", "(2, 1)", "(a, b)", "1, 2"])
def test_bad_domains(text):
    with pytest.raises(DomainSyntaxError):
        parse_domain(text)
