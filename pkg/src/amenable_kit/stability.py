"""Empirical backward / mixed / forward stability of AST evaluation.

Each check measures, per (x, t), the smallest constant a sample needs:

* forward:  distance(f^(x), f(x)) / (u * mu(f, x))
* backward: distance(x, y) / u   with f(y) = f^(x)
* mixed:    min over y of max(distance(f^(x), f(y)), distance(x, y)) / u

``estimate_C`` then finds the smallest C >= 1 such that every sample inside
the definition's precision window (u < 1/C, or u < 1/(C mu) for forward)
needs at most C.  Raising C shrinks the window, so the iteration stops.
"""

from __future__ import annotations

import os
from functools import lru_cache
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import expr as ex
from .autodiff import try_jet2
from .conditioning import cond_report
from .fp_sim import FpSystem, NoOutput, fp_value
from .intervals import Interval, IntervalDomain, as_domain
from .metric import rel_distance
from .refnum import INF, mp, mpf, to_mpf

DEFAULT_TS = (8, 12, 16, 20, 24)
MONOTONE_WINDOW = mpf(1) / 16  # relative radius searched for a preimage


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("AMENABLE_KIT_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn: Callable, items: Sequence) -> list:
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# sampling


def sample_points(dom, n: int = 256, seed: int = 0, decades: int = 6) -> list[float]:
    """``n`` log-uniform points per component (split at 0), reproducibly."""
    rng = np.random.default_rng(seed)
    out: list[float] = []
    for iv in as_domain(dom).components():
        sign = 1.0 if iv.a >= 0 else -1.0
        a, b = (iv.a, iv.b) if sign > 0 else (-iv.b, -iv.a)
        hi = float(b) if mp.isfinite(b) else None
        lo = float(a) if a > 0 else None
        if lo is None:
            lo = min(hi if hi is not None else 1.0, 1.0) * 10.0**-decades
        if hi is None:
            hi = max(lo, 1.0) * 10.0**decades
        u = rng.uniform(np.log(lo), np.log(hi), n)
        pts = np.exp(u)
        pts = pts[(pts > lo) & (pts < hi)]
        out.extend(float(sign * p) for p in np.sort(pts))
    return out


# ---------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class Sample:
    x: object
    t: int
    u: Fraction
    distance: object  # measured quantity (forward: output distance)
    mu: object
    ratio: object  # constant this sample needs; INF for violations
    status: str = "ok"  # ok | no_output | skipped_infinite_mu | not_checkable | no_preimage
    y: object = None

    @property
    def counted(self) -> bool:
        return self.status in ("ok", "no_output", "no_preimage")


@dataclass
class StabilityVerdict:
    kind: str
    samples: list
    estimated_C: object
    violations: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations and self.estimated_C != INF

    def per_t(self) -> dict:
        out = {}
        for t in sorted({s.t for s in self.samples}):
            sub = [s for s in self.samples if s.t == t]
            out[t] = estimate_C(sub, self.kind)[0]
        return out


def _window_ok(s: Sample, C, kind: str) -> bool:
    u = mpf(s.u.numerator) / s.u.denominator
    if kind == "forward":
        return u * C * s.mu < 1
    return u * C < 1


def estimate_C(samples: Iterable[Sample], kind: str):
    """Smallest C >= 1 satisfied by every sample inside its u-window."""
    samples = [s for s in samples if s.counted]
    C = mpf(1)
    for _ in range(200):
        need = [s.ratio for s in samples if _window_ok(s, C, kind)]
        worst = max(need, default=mpf(0))
        if worst <= C:
            break
        if worst == INF:
            C = INF
            break
        C = worst
    violations = [s for s in samples if s.ratio == INF and (C == INF or _window_ok(s, C, kind))]
    return C, violations


def _verdict(kind: str, samples: list, notes=None) -> StabilityVerdict:
    C, viol = estimate_C(samples, kind)
    skipped = [s for s in samples if not s.counted]
    return StabilityVerdict(kind, samples, C, viol, skipped, list(notes or []))


# ---------------------------------------------------------------------------
# forward


def _as_system(t) -> FpSystem:
    return t if isinstance(t, FpSystem) else FpSystem(int(t))


def forward_sample(f: ex.Expr, x, ts: Sequence = DEFAULT_TS) -> list[Sample]:
    x = to_mpf(x) if not isinstance(x, float) else x
    xm = to_mpf(x)
    try:
        rep = cond_report(f, xm)
    except (ex.DomainViolation, ZeroDivisionError, ValueError):
        return []
    out = []
    for t in ts:
        sys = _as_system(t)
        if rep.mu == INF:
            out.append(Sample(x, sys.t, sys.u, None, INF, None, "skipped_infinite_mu"))
            continue
        try:
            v = fp_value(sys, f, x)
        except NoOutput:
            out.append(Sample(x, sys.t, sys.u, INF, rep.mu, INF, "no_output"))
            continue
        d = rel_distance(v, rep.f)
        ratio = d / (to_mpf(sys.u) * rep.mu)
        out.append(Sample(x, sys.t, sys.u, d, rep.mu, ratio))
    return out


def forward_profile(f: ex.Expr, dom=None, xs=None, ts: Sequence = DEFAULT_TS, n: int = 256, seed: int = 0) -> StabilityVerdict:
    """distance(f^(x), f(x)) <= C u mu(f, x) over the sample grid."""
    if xs is None:
        xs = sample_points(dom, n, seed)
    rows = parallel_map(lambda x: forward_sample(f, x, ts), list(xs))
    return _verdict("forward", [s for r in rows for s in r])


# ---------------------------------------------------------------------------
# backward / mixed


def _component_of(dom, x) -> Interval | None:
    if dom is None:
        return None
    for iv in as_domain(dom).components():
        if iv.contains(x):
            return iv
    return None


@lru_cache(maxsize=4096)
def _monotone_window(f: ex.Expr, x, comp: Interval | None, radius=MONOTONE_WINDOW):
    """(lo, hi, sign of f') if f is strictly monotone on a window around x."""
    lo, hi = sorted((x * mp.exp(-radius), x * mp.exp(radius)))
    if comp is not None:
        lo, hi = max(lo, comp.a), min(hi, comp.b)
    pts = [lo + (hi - lo) * mpf(k) / 64 for k in range(1, 64)] + [x]
    signs = set()
    for p in pts:
        j = try_jet2(f, p)
        if j is None:
            return None
        if j.d1 == 0:
            return None
        signs.add(j.d1 > 0)
    if len(signs) != 1:
        return None
    return lo, hi, signs.pop()


def _preimage(f: ex.Expr, x, v, window, u):
    """y near x with f(y) = v, searching outward from x within ``window``."""
    from .roots import refine_bracket

    lo, hi, _ = window

    def g(y):
        return ex.evaluate(f, y) - v

    g0 = g(x)
    if g0 == 0:
        return x
    r = u / 256
    while True:
        cands = [x * mp.exp(-r), x * mp.exp(r)]
        for c in cands:
            if not (lo <= c <= hi):
                continue
            gc = g(c)
            if gc == 0:
                return c
            if (gc > 0) != (g0 > 0):
                a, b = sorted((x, c))
                ga, gb = (g0, gc) if a == x else (gc, g0)
                return refine_bracket(g, a, b, ga, gb, rel_tol=1e-40)[2]
        if r > MONOTONE_WINDOW:
            return None
        r *= 2


def backward_sample(f: ex.Expr, x, t, dom=None) -> Sample:
    sys = _as_system(t)
    u = to_mpf(sys.u)
    xm = to_mpf(x)
    try:
        v = fp_value(sys, f, x)
    except NoOutput:
        return Sample(x, sys.t, sys.u, INF, None, INF, "no_output")
    if xm == 0:
        fx = ex.try_evaluate(f, xm)
        if fx is not None and fx == v:
            return Sample(x, sys.t, sys.u, mpf(0), None, mpf(0), "ok", xm)
        return Sample(x, sys.t, sys.u, INF, None, INF, "no_preimage")
    win = _monotone_window(f, xm, _component_of(dom, xm))
    if win is None:
        return Sample(x, sys.t, sys.u, None, None, None, "not_checkable")
    y = _preimage(f, xm, v, win, u)
    if y is None:
        # no preimage within the window: distance exceeds its radius
        return Sample(x, sys.t, sys.u, MONOTONE_WINDOW, None, INF, "no_preimage")
    d = rel_distance(xm, y)
    return Sample(x, sys.t, sys.u, d, None, d / u, "ok", y)


def backward_check(f: ex.Expr, dom=None, xs=None, ts: Sequence = DEFAULT_TS, n: int = 64, seed: int = 0) -> StabilityVerdict:
    """exists y: f^(x) = f(y), distance(x, y) <= C u (monotone windows only)."""
    if xs is None:
        xs = sample_points(dom, n, seed)
    xs = [xs] if not isinstance(xs, (list, tuple)) else list(xs)
    ts = [ts] if isinstance(ts, (int, FpSystem)) else list(ts)
    rows = parallel_map(lambda x: [backward_sample(f, x, t, dom) for t in ts], xs)
    return _verdict("backward", [s for r in rows for s in r])


def mixed_sample(f: ex.Expr, x, t, dom=None, back: Sample | None = None, grid: int = 16) -> Sample:
    sys = _as_system(t)
    u = to_mpf(sys.u)
    xm = to_mpf(x)
    try:
        v = fp_value(sys, f, x)
    except NoOutput:
        return Sample(x, sys.t, sys.u, INF, None, INF, "no_output")
    if back is None:
        back = backward_sample(f, x, sys, dom)
    cands = [xm]
    if back.y is not None:
        yb = back.y
        cands.append(yb)
        if xm != 0 and yb != xm:
            step = mp.log(yb / xm)
            cands += [xm * mp.exp(step * mpf(k) / grid) for k in range(1, grid)]
    elif xm != 0:
        cands += [xm * mp.exp(u * mpf(k) / 4) for k in range(-16, 17) if k]
    comp = _component_of(dom, xm)
    best, best_y = INF, None
    for y in cands:
        if comp is not None and xm != 0 and not comp.contains(y):
            continue
        fy = ex.try_evaluate(f, y)
        if fy is None:
            continue
        need = max(rel_distance(v, fy), rel_distance(xm, y)) / u
        if need < best:
            best, best_y = need, y
    status = "ok" if best != INF else "no_preimage"
    return Sample(x, sys.t, sys.u, best * u if best != INF else INF, None, best, status, best_y)


def mixed_check(f: ex.Expr, dom=None, xs=None, ts: Sequence = DEFAULT_TS, n: int = 64, seed: int = 0) -> StabilityVerdict:
    if xs is None:
        xs = sample_points(dom, n, seed)
    xs = [xs] if not isinstance(xs, (list, tuple)) else list(xs)
    ts = [ts] if isinstance(ts, (int, FpSystem)) else list(ts)
    rows = parallel_map(lambda x: [mixed_sample(f, x, t, dom) for t in ts], xs)
    return _verdict("mixed", [s for r in rows for s in r])


def chain_profile(f: ex.Expr, dom, xs=None, ts: Sequence = DEFAULT_TS, n: int = 64, seed: int = 0):
    """Backward, mixed and forward verdicts on one shared sample set."""
    if xs is None:
        xs = sample_points(dom, n, seed)
    back, mixed, fwd = [], [], []
    for x in xs:
        fwd.extend(forward_sample(f, x, ts))
        for t in ts:
            b = backward_sample(f, x, t, dom)
            back.append(b)
            mixed.append(mixed_sample(f, x, t, dom, back=b))
    return _verdict("backward", back), _verdict("mixed", mixed), _verdict("forward", fwd)


# ---------------------------------------------------------------------------
# composition


@dataclass
class CompositionReport:
    g: str
    h: str
    hypotheses_met: bool
    hypothesis_notes: list
    verdict: StabilityVerdict
    per_t: dict
    bounded: bool
    bound_limit: float


def composition_experiment(
    g: ex.Expr,
    h: ex.Expr,
    dom,
    xs=None,
    ts: Sequence = DEFAULT_TS,
    compat=None,
    amenable_g=None,
    amenable_h=None,
    n: int = 128,
    seed: int = 0,
    bound_limit: float = 100.0,
) -> CompositionReport:
    """Forward constant of the composed evaluator g^(h^(x)) against mu(g o h, x)."""
    notes = []
    if compat is None:
        from .compatibility import check_compatible

        compat = check_compatible(g, h, dom, n=min(n, 64), seed=seed)
    ok = compat.verdict == "supported"
    if not ok:
        notes.append(f"compatibility {compat.verdict}")
    for name, rep in (("g", amenable_g), ("h", amenable_h)):
        if rep is not None and rep.overall != "supported":
            ok = False
            notes.append(f"amenability of {name}: {rep.overall}")
    composed = ex.substitute(g, h)
    v = forward_profile(composed, dom, xs, ts, n, seed)
    per_t = v.per_t()
    bounded = v.holds and all(c != INF and c <= bound_limit for c in per_t.values())
    return CompositionReport(ex.to_text(g), ex.to_text(h), ok, notes, v, per_t, bool(bounded), bound_limit)
