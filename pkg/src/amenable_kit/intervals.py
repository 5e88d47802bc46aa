"""Finite unions of open intervals with extended-real endpoints.

Text form: ``(a,b)`` joined by ``U``, e.g. ``(-pi/2, pi/2) U (pi/2, 3*pi/2)``.
Endpoints accept numbers, ``pi``, ``e``, ``inf``/``-inf`` and the four
arithmetic operators.  Square brackets are accepted as synonyms; every
interval is treated as open.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .refnum import INF, mp, mpf


class DomainSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Endpoint:
    value: object  # reference mpf, possibly +-inf
    text: str = ""

    @classmethod
    def of(cls, v) -> "Endpoint":
        if isinstance(v, Endpoint):
            return v
        if isinstance(v, str):
            return parse_endpoint(v)
        return cls(mpf(v), "")

    def render(self) -> str:
        if self.text:
            return self.text
        v = self.value
        if v == INF:
            return "inf"
        if v == -INF:
            return "-inf"
        # enough digits for a lossless round trip at the reference precision
        return mp.nstr(v, int(mp.prec * 0.30103) + 3, strip_zeros=True)

    def __float__(self) -> float:
        return float(self.value)


_ETOK = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<id>[A-Za-z]+)|(?P<op>[-+*/()]))")


def parse_endpoint(text: str) -> Endpoint:
    src = text.strip()
    toks = []
    pos = 0
    while pos < len(src):
        m = _ETOK.match(src, pos)
        if m is None or m.end() == pos:
            raise DomainSyntaxError(f"bad endpoint {text!r} at offset {pos}")
        toks.append((m.lastgroup, m.group(m.lastgroup)))
        pos = m.end()
    toks.append(("end", ""))
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def expr():
        v = term()
        while peek()[1] in ("+", "-") and peek()[0] == "op":
            op = take()[1]
            r = term()
            v = v + r if op == "+" else v - r
        return v

    def term():
        v = unary()
        while True:
            kind, val = peek()
            if kind == "op" and val in "*/":
                take()
                r = unary()
                v = v * r if val == "*" else v / r
            elif kind in ("id", "num") or (kind == "op" and val == "("):
                v = v * unary()  # implicit product, e.g. 3pi
            else:
                return v

    def unary():
        kind, val = peek()
        if kind == "op" and val in "+-":
            take()
            v = unary()
            return -v if val == "-" else v
        return atom()

    def atom():
        kind, val = take()
        if kind == "num":
            return mpf(val)
        if kind == "id":
            name = val.lower()
            if name in ("inf", "infinity", "oo"):
                return INF
            if name == "pi":
                return +mp.pi
            if name == "e":
                return mp.e + 0
            raise DomainSyntaxError(f"unknown name {val!r} in endpoint {text!r}")
        if kind == "op" and val == "(":
            v = expr()
            if take() != ("op", ")"):
                raise DomainSyntaxError(f"unbalanced parentheses in endpoint {text!r}")
            return v
        raise DomainSyntaxError(f"unexpected {val or 'end'!r} in endpoint {text!r}")

    v = expr()
    if peek()[0] != "end":
        raise DomainSyntaxError(f"trailing input in endpoint {text!r}")
    return Endpoint(v, src)


@dataclass(frozen=True)
class Interval:
    lo: Endpoint
    hi: Endpoint

    def __post_init__(self):
        if not self.lo.value < self.hi.value:
            raise ValueError(f"empty interval ({self.lo.render()}, {self.hi.render()})")

    @classmethod
    def of(cls, lo, hi) -> "Interval":
        return cls(Endpoint.of(lo), Endpoint.of(hi))

    @property
    def a(self):
        return self.lo.value

    @property
    def b(self):
        return self.hi.value

    def contains(self, x) -> bool:
        return self.a < x < self.b

    def straddles_zero(self) -> bool:
        return self.a < 0 < self.b

    def render(self) -> str:
        return f"({self.lo.render()}, {self.hi.render()})"

    def bounded(self) -> bool:
        return mp.isfinite(self.a) and mp.isfinite(self.b)


@dataclass(frozen=True)
class IntervalDomain:
    """Ordered, pairwise disjoint open intervals."""

    intervals: tuple = ()
    unresolved: bool = False
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        ivs = tuple(sorted(self.intervals, key=lambda iv: iv.a))
        for p, q in zip(ivs, ivs[1:]):
            if q.a < p.b:
                raise ValueError(f"overlapping intervals {p.render()} and {q.render()}")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def of(cls, *pairs) -> "IntervalDomain":
        return cls(tuple(Interval.of(lo, hi) for lo, hi in pairs))

    @classmethod
    def real_line(cls) -> "IntervalDomain":
        return cls.of(("-inf", "inf"))

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, x) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    def contains_zero(self) -> bool:
        return any(iv.straddles_zero() for iv in self.intervals)

    def components(self) -> list[Interval]:
        """Split at 0: the relative-error topology isolates the origin."""
        out = []
        for iv in self.intervals:
            if iv.straddles_zero():
                out.append(Interval(iv.lo, Endpoint(mpf(0), "0")))
                out.append(Interval(Endpoint(mpf(0), "0"), iv.hi))
            else:
                out.append(iv)
        return out

    def intersect(self, other: "IntervalDomain") -> "IntervalDomain":
        out = []
        for p in self.intervals:
            for q in other.intervals:
                lo = p.lo if p.a >= q.a else q.lo
                hi = p.hi if p.b <= q.b else q.hi
                if lo.value < hi.value:
                    out.append(Interval(lo, hi))
        return IntervalDomain(tuple(out), self.unresolved or other.unresolved, self.notes + other.notes)

    def render(self) -> str:
        if not self.intervals:
            return "empty"
        return " U ".join(iv.render() for iv in self.intervals)

    def __str__(self) -> str:
        return self.render()


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch in "Uu∪":
            parts.append("".join(cur))
            cur = []
            continue
        cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_domain(text: str) -> IntervalDomain:
    """Parse ``(a,b) U (c,d)``; ``R``/``reals`` means the whole line."""
    s = text.strip()
    if s.lower() in ("r", "reals", "real", "ℝ"):
        return IntervalDomain.real_line()
    ivs = []
    for part in _split_top(s):
        if part[0] not in "([" or part[-1] not in ")]":
            raise DomainSyntaxError(f"interval must look like (a,b): {part!r}")
        body = part[1:-1]
        depth = 0
        cut = None
        for i, ch in enumerate(body):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                if cut is not None:
                    raise DomainSyntaxError(f"too many commas in {part!r}")
                cut = i
        if cut is None:
            raise DomainSyntaxError(f"missing comma in {part!r}")
        try:
            ivs.append(Interval(parse_endpoint(body[:cut]), parse_endpoint(body[cut + 1 :])))
        except ValueError as exc:
            raise DomainSyntaxError(str(exc)) from exc
    try:
        return IntervalDomain(tuple(ivs))
    except ValueError as exc:
        raise DomainSyntaxError(str(exc)) from exc


def as_domain(d) -> IntervalDomain:
    if isinstance(d, IntervalDomain):
        return d
    if isinstance(d, Interval):
        return IntervalDomain((d,))
    if isinstance(d, str):
        return parse_domain(d)
    if isinstance(d, Iterable):
        return IntervalDomain.of(*d)
    raise TypeError(f"cannot interpret {d!r} as a domain")
