"""Reference-precision arithmetic shared by every module.

All "exact" quantities (f(x), f'(x), f''(x), kappa, H, G) are computed in a
private mpmath context with ``REF_BITS`` bits of mantissa.  The context is
never mutated after import, so it is safe to share between threads.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Real
from typing import Union

import mpmath

# >= 2x the widest simulated precision (t <= 32) and >= 64 fractional bits.
REF_BITS = 160

mp = mpmath.MPContext()
mp.prec = REF_BITS

mpf = mp.mpf
INF = mp.inf
PI = mp.pi

#: |value| below ZERO_EPS * scale is treated as an exact zero.
ZERO_EPS = mp.ldexp(mpf(1), -(REF_BITS - 8))

RealLike = Union[int, float, str, Fraction, "mpmath.mpf"]


def to_mpf(x: RealLike):
    """Convert a real-like value to a reference mpf without double rounding."""
    if isinstance(x, Fraction):
        return mp.fdiv(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return INF
        if s in ("-inf", "-infinity"):
            return -INF
        return mpf(s)
    if isinstance(x, (int, float)) or isinstance(x, Real):
        return mpf(x)
    return mpf(x)


def to_fraction(x) -> Fraction:
    """Exact rational value of a finite mpf, float, int or Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    v = mpf(x)
    if not mp.isfinite(v):
        raise ValueError("cannot convert non-finite value to Fraction")
    man, exp = mpf_parts(v)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def mpf_parts(v) -> tuple[int, int]:
    """(signed integer mantissa, exponent) with v = man * 2**exp, for finite v."""
    sign, man, exp, _ = mpf(v)._mpf_
    man = int(man)
    return (-man if sign else man), int(exp)


def is_inf(x) -> bool:
    return x == INF or x == -INF


def numerically_zero(value, scale=1) -> bool:
    """True when ``value`` is indistinguishable from 0 relative to ``scale``."""
    if value == 0:
        return True
    return abs(value) <= ZERO_EPS * max(mpf(1), abs(mpf(scale)))


def fmt(x, digits: int = 17) -> str:
    """Stable decimal rendering used in reports (``inf`` for infinities)."""
    if x is None:
        return "undefined"
    if isinstance(x, Fraction):
        x = to_mpf(x)
    if isinstance(x, (int, float)):
        x = mpf(x)
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return mp.nstr(x, digits, min_fixed=-6, max_fixed=12)


def to_float(x) -> float:
    if x is None:
        return float("nan")
    return float(x)
