"""The relative-error distance on the real line and its balls."""

from __future__ import annotations

from dataclasses import dataclass

from .refnum import INF, mp, mpf, to_mpf


def rel_distance(x, y):
    """0 if x = y = 0, |log(y/x)| if xy > 0, +inf otherwise."""
    x, y = to_mpf(x), to_mpf(y)
    if x == 0 and y == 0:
        return mpf(0)
    if x * y > 0:
        if x == y:
            return mpf(0)
        a, b = sorted((abs(x), abs(y)))
        return mp.log(b / a)  # ordered so the result is exactly symmetric
    return INF


@dataclass(frozen=True)
class MetricBall:
    center: object
    radius: object
    lo: object
    hi: object

    @property
    def degenerate(self) -> bool:
        return self.center == 0

    def contains(self, y) -> bool:
        y = to_mpf(y)
        if self.degenerate:
            return y == 0
        return self.lo < y < self.hi

    def within(self, a, b) -> bool:
        """Is the ball a subset of the open interval (a, b)?"""
        if self.degenerate:
            return a < 0 < b
        return a <= self.lo and self.hi <= b


def ball(x, r) -> MetricBall:
    """{y : rel_distance(x, y) < r}; the ball of 0 is {0} for every r."""
    x, r = to_mpf(x), to_mpf(r)
    if not r > 0 or not mp.isfinite(r):
        raise ValueError("radius must be positive and finite")
    if x == 0:
        return MetricBall(x, r, x, x)
    lo, hi = x * mp.exp(-r), x * mp.exp(r)
    if x < 0:
        lo, hi = hi, lo
    return MetricBall(x, r, lo, hi)


def dist_to_set(x, points) -> object:
    """inf of rel_distance(x, s) over s; +inf for an empty set.

    ``points`` may hold reals, or objects with a ``root`` attribute (brackets
    of a zero locus).  The limit points 0 and +-inf are directions, not
    points, so they contribute +inf for any x != 0.
    """
    best = INF
    for s in points:
        s = getattr(s, "root", s)
        s = to_mpf(s)
        if not mp.isfinite(s):
            continue
        d = rel_distance(x, s)
        if d < best:
            best = d
    return best
