"""Pointwise condition numbers and the H / G diagnostics.

For analytic f and x != 0 with f(x) != 0::

    kappa(f, x) = |x f'(x) / f(x)|          mu = 1 + kappa
    H(f, x) = x^2 f f'' / (f^2 + x^2 f'^2)
    G(f, x) = (x f f' + x^2 f f'' - x^2 f'^2) / (f^2 + x^2 f'^2)

kappa is 0 at x = 0 and +inf at nonzero zeros of f.  H and G are reported as
``None`` where their denominator vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import expr as ex
from .autodiff import Jet2, eval_jet2
from .refnum import INF, mp, mpf, to_mpf


@dataclass(frozen=True)
class CondReport:
    x: object
    f: object
    fprime: object
    fsecond: object
    kappa: object
    mu: object
    H: object  # None: undefined (zero denominator)
    G: object
    numerically_zero: bool = False


def _kappa_from_jet(x, j: Jet2):
    if x == 0:
        return mpf(0)
    if j.v == 0 or j.vanishes:
        return INF
    return abs(x * j.d1 / j.v)


def _hg_from_jet(x, j: Jet2):
    f, d1, d2 = j.v, j.d1, j.d2
    if j.vanishes:
        f = mpf(0)
    den = f * f + x * x * d1 * d1
    if den == 0:
        return None, None
    h = x * x * f * d2 / den
    g = (x * f * d1 + x * x * f * d2 - x * x * d1 * d1) / den
    return h, g


def cond_report(f: ex.Expr, x) -> CondReport:
    x = to_mpf(x)
    j = eval_jet2(f, x)
    k = _kappa_from_jet(x, j)
    h, g = _hg_from_jet(x, j)
    return CondReport(x, j.v, j.d1, j.d2, k, k + 1, h, g, bool(j.vanishes and x != 0))


def kappa(f: ex.Expr, x):
    """Condition number in the relative-error metric; may be +inf."""
    x = to_mpf(x)
    if x == 0:
        return mpf(0)
    return _kappa_from_jet(x, eval_jet2(f, x))


def mu(f: ex.Expr, x):
    return 1 + kappa(f, x)


def H_value(f: ex.Expr, x):
    x = to_mpf(x)
    return _hg_from_jet(x, eval_jet2(f, x))[0]


def G_value(f: ex.Expr, x):
    x = to_mpf(x)
    return _hg_from_jet(x, eval_jet2(f, x))[1]


def try_kappa(f: ex.Expr, x):
    try:
        return kappa(f, x)
    except (ex.DomainViolation, ZeroDivisionError, ValueError):
        return None


def try_H(f: ex.Expr, x):
    try:
        return H_value(f, x)
    except (ex.DomainViolation, ZeroDivisionError, ValueError):
        return None


@dataclass(frozen=True)
class CompositionCheck:
    x: object
    lhs: object  # kappa(g o h, x)
    product: object  # kappa(g, h(x)) * kappa(h, x)
    bound_holds: bool
    equality_applies: bool
    rel_gap: object  # |lhs - product| / (1 + lhs), or None


def composition_kappa_check(g: ex.Expr, h: ex.Expr, x, rel_slack=mpf("1e-10")) -> CompositionCheck:
    """Compare kappa(g o h, x) against kappa(g, h(x)) * kappa(h, x)."""
    x = to_mpf(x)
    gh = ex.substitute(g, h)
    lhs = kappa(gh, x)
    hj = eval_jet2(h, x)
    hx = hj.v
    k_h = _kappa_from_jet(x, hj)
    k_g = kappa(g, hx)
    if k_g == 0 or k_h == 0:
        product = mpf(0) if not (k_g == INF or k_h == INF) else INF
    else:
        product = k_g * k_h
    if product == INF:
        bound = True
    elif lhs == INF:
        bound = False
    else:
        bound = lhs <= product * (1 + rel_slack) + mpf(0)
    equality = x != 0 and not hj.vanishes and hx != 0 and lhs != INF and k_g != INF and k_h != INF
    gap = abs(lhs - product) / (1 + lhs) if equality else None
    return CompositionCheck(x, lhs, product, bool(bound or x == 0), bool(equality), gap)


def inf_safe_ratio(num, den):
    """num / den over [0, inf] with the rule inf / inf = 1."""
    if num == INF and den == INF:
        return mpf(1)
    if den == INF:
        return mpf(0)
    if num == INF:
        return INF
    if den == 0:
        return INF if num > 0 else mpf(0)
    return num / den


def is_finite(v) -> bool:
    return v is not None and mp.isfinite(v)
