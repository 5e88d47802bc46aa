"""Zero loci and natural domains.

Scans run on a float64 grid that is geometric in |x| (uniform in the
relative-error metric).  Every sign change found there is re-certified and
refined at reference precision, so float rounding can only cause a root to be
missed, never invented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import expr as ex
from .intervals import Endpoint, Interval, IntervalDomain, as_domain
from .refnum import INF, mp, mpf, numerically_zero


@dataclass(frozen=True)
class ScanPolicy:
    samples_per_decade: int = 10_000
    decades: int = 12  # how far scans reach toward 0 and toward infinity
    rel_tol: float = 1e-30  # refinement target: bracket width relative to |x|
    max_touching: int = 2_000
    max_roots: int = 100_000


DEFAULT_SCAN = ScanPolicy()
COARSE_SCAN = ScanPolicy(samples_per_decade=400, decades=12, rel_tol=1e-24)


class Fn(NamedTuple):
    """A scalar function with a reference evaluator and a vectorised one."""

    mp: Callable
    vec: Callable


def as_fn(f) -> Fn:
    if isinstance(f, Fn):
        return f
    return Fn(ex.mp_fn(f), ex.float_fn(f))


@dataclass(frozen=True)
class Bracket:
    lo: object
    hi: object
    root: object  # refined estimate at reference precision
    touching: bool = False

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class ZeroLocus:
    brackets: tuple
    tolerance: float
    exhaustive_within: tuple  # scanned (lo, hi) ranges, as mpf pairs
    resolution_ok: bool = True
    notes: tuple = field(default=(), compare=False)

    @property
    def roots(self) -> list:
        return [b.root for b in self.brackets]

    def __len__(self) -> int:
        return len(self.brackets)

    def is_empty(self) -> bool:
        return not self.brackets


# ---------------------------------------------------------------------------
# grids


def _span(iv: Interval, policy: ScanPolicy) -> tuple[float, float, bool]:
    """Finite positive scan range for a component inside (0, inf)."""
    a, b = iv.a, iv.b
    clipped = False
    hi = float(b) if mp.isfinite(b) else None
    lo = float(a) if a > 0 else None
    if lo is None:
        lo = min(hi if hi is not None else 1.0, 1.0) * 10.0 ** (-policy.decades)
        clipped = True
    if hi is None:
        hi = max(lo, 1.0) * 10.0 ** policy.decades
        clipped = True
    return lo, hi, clipped


def geometric_grid(lo: float, hi: float, per_decade: int, include_ends: bool = False) -> np.ndarray:
    if not (0 < lo < hi):
        raise ValueError("geometric grid needs 0 < lo < hi")
    n = max(3, int(math.ceil(math.log10(hi / lo) * per_decade)) + 1)
    g = np.geomspace(lo, hi, n)
    if not include_ends:
        g = g[1:-1] if n > 3 else g
    return g


# ---------------------------------------------------------------------------
# refinement


def refine_bracket(fm: Callable, lo, hi, flo=None, fhi=None, rel_tol: float = 1e-30, max_iter: int = 400):
    """Illinois iteration with bisection safeguard.  Returns (lo, hi, root)."""
    lo, hi = mpf(lo), mpf(hi)
    flo = fm(lo) if flo is None else flo
    fhi = fm(hi) if fhi is None else fhi
    if flo == 0:
        return lo, lo, lo
    if fhi == 0:
        return hi, hi, hi
    if (flo > 0) == (fhi > 0):
        raise ValueError("bracket does not change sign")
    tol = mpf(rel_tol)
    side = 0
    for it in range(max_iter):
        width = hi - lo
        scale = max(abs(lo), abs(hi))
        if width <= tol * scale or width == 0:
            break
        if it % 3 == 2:
            mid = (lo + hi) / 2
        else:
            mid = (lo * fhi - hi * flo) / (fhi - flo)
            if not (lo < mid < hi):
                mid = (lo + hi) / 2
        fmid = fm(mid)
        if fmid == 0:
            return mid, mid, mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
            if side == -1:
                fhi = fhi / 2
            side = -1
        else:
            hi, fhi = mid, fmid
            if side == 1:
                flo = flo / 2
            side = 1
    root = (lo + hi) / 2
    return lo, hi, root


def golden_min(fm: Callable, lo, hi, rel_tol: float = 1e-24, max_iter: int = 300):
    """Minimiser of a unimodal ``fm`` on [lo, hi] by golden-section search."""
    lo, hi = mpf(lo), mpf(hi)
    invphi = (mp.sqrt(5) - 1) / 2
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = fm(c), fm(d)
    for _ in range(max_iter):
        if hi - lo <= mpf(rel_tol) * max(abs(lo), abs(hi)):
            break
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = fm(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = fm(d)
    x = (lo + hi) / 2
    return x, fm(x)


def _safe(fm: Callable) -> Callable:
    def g(x):
        try:
            return fm(x)
        except (ex.DomainViolation, ZeroDivisionError, ValueError):
            return None

    return g


# ---------------------------------------------------------------------------
# zero locus


def _scan_positive(fn: Fn, lo: float, hi: float, per_decade: int, policy: ScanPolicy, sign: int):
    """Roots of x -> fn(sign * x) on the positive range (lo, hi)."""
    grid = geometric_grid(lo, hi, per_decade, include_ends=False)
    vals = fn.vec(sign * grid)
    fm = _safe(fn.mp)
    found = []
    finite = np.isfinite(vals)
    s = np.sign(vals)
    idx = np.nonzero(finite[:-1] & finite[1:] & (s[:-1] * s[1:] < 0))[0]
    exact = np.nonzero(finite & (vals == 0))[0]
    cands = [(int(i), int(i) + 1) for i in idx]
    for i in exact:
        cands.append((max(int(i) - 1, 0), min(int(i) + 1, len(grid) - 1)))
    seen = set()
    for i, j in sorted(set(cands)):
        l, r = mpf(float(sign * grid[i])), mpf(float(sign * grid[j]))
        if l > r:
            l, r = r, l
        fl, fr = fm(l), fm(r)
        if fl is None or fr is None:
            continue
        if fl == 0 or fr == 0 or (fl > 0) != (fr > 0):
            try:
                bl, bh, root = refine_bracket(fn.mp, l, r, fl, fr, policy.rel_tol)
            except (ValueError, ex.DomainViolation, ZeroDivisionError):
                continue
            # a sign change across a pole is not a root
            fv = fm(root)
            scale = max(abs(fl), abs(fr))
            if fv is None or abs(fv) > scale:
                continue
            key = mp.nstr(root, 25)
            if key not in seen:
                seen.add(key)
                found.append(Bracket(l, r, root))
        if len(found) >= policy.max_roots:
            break
    # even-multiplicity zeros: local extrema of f that come close to 0
    touching = []
    if len(grid) > 3:
        a = np.abs(np.where(finite, vals, np.inf))
        interior = np.arange(1, len(grid) - 1)
        is_min = (a[1:-1] <= a[:-2]) & (a[1:-1] <= a[2:]) & np.isfinite(a[1:-1])
        same = s[:-2] * s[2:] > 0
        cand = interior[is_min & same]
        if len(cand):
            k = 16
            pad = np.concatenate([np.full(k, -np.inf), np.where(np.isfinite(a), a, -np.inf), np.full(k, -np.inf)])
            win = np.lib.stride_tricks.sliding_window_view(pad, 2 * k + 1)
            local_max = win.max(axis=1)
            cand = [int(c) for c in cand if a[c] <= 0.05 * local_max[c]]
        for c in cand[: policy.max_touching]:
            l, r = mpf(float(sign * grid[c - 1])), mpf(float(sign * grid[c + 1]))
            if l > r:
                l, r = r, l

            def absf(x):
                v = fm(x)
                return mp.inf if v is None else abs(v)

            xm, fv = golden_min(absf, l, r, rel_tol=1e-24)
            edge = max(absf(l), absf(r))
            if fv != mp.inf and (fv == 0 or fv <= mp.ldexp(edge, -60)):
                if not any(b.lo <= xm <= b.hi for b in found):
                    touching.append(Bracket(l, r, xm, touching=True))
    return found + touching, len(idx)


def zero_locus(f, dom, scan: ScanPolicy = DEFAULT_SCAN) -> ZeroLocus:
    """Certified brackets around the zeros of ``f`` found in ``dom``.

    ``dom`` is split at 0.  Unbounded or zero-touching components are scanned
    only ``scan.decades`` decades deep; ``exhaustive_within`` records the
    ranges actually covered.
    """
    fn = as_fn(f)
    dom = as_domain(dom)
    brackets, covered, notes = [], [], []
    ok = True
    for iv in dom.components():
        sign = 1 if iv.a >= 0 else -1
        pos = iv if sign > 0 else Interval(Endpoint(-iv.b), Endpoint(-iv.a))
        lo, hi, clipped = _span(pos, scan)
        if not lo < hi:
            continue
        found, n_sign = _scan_positive(fn, lo, hi, scan.samples_per_decade, scan, sign)
        half = max(2, scan.samples_per_decade // 2)
        grid_half = geometric_grid(lo, hi, half)
        vh = fn.vec(sign * grid_half)
        sh = np.sign(vh)
        fin = np.isfinite(vh)
        n_half = int(np.count_nonzero(fin[:-1] & fin[1:] & (sh[:-1] * sh[1:] < 0)))
        if n_half != n_sign:
            ok = False
            notes.append(f"root count changed with grid density on {iv.render()}")
        brackets.extend(found)
        if sign > 0:
            covered.append((mpf(lo), mpf(hi)))
        else:
            covered.append((mpf(-hi), mpf(-lo)))
        if clipped:
            notes.append(f"scan of {iv.render()} clipped to |x| in [{lo:.3g}, {hi:.3g}]")
    brackets.sort(key=lambda b: b.root)
    return ZeroLocus(tuple(brackets), scan.rel_tol, tuple(covered), ok, tuple(notes))


# ---------------------------------------------------------------------------
# natural domain


def _constraints(e: ex.Expr):
    """(kind, Fn) pairs restricting where node ``e`` itself is defined."""
    if isinstance(e, ex.Div):
        return [("nonzero", as_fn(e.right))]
    if isinstance(e, ex.Pow):
        q = e.exponent
        if q.denominator != 1:
            return [("pos", as_fn(e.base))]
        if q < 0:
            return [("nonzero", as_fn(e.base))]
        return []
    if isinstance(e, ex.Intrinsic):
        arg = e.arg
        k = e.kind
        if k in ("log", "sqrt"):
            return [("pos", as_fn(arg))]
        if k == "acosh":
            return [("pos", as_fn(ex.Sub(arg, ex.Const(1))))]
        if k == "tan":
            return [("nonzero", as_fn(ex.Intrinsic("cos", arg)))]
        if k == "cot":
            return [("nonzero", as_fn(ex.Intrinsic("sin", arg)))]
        if k in ("gamma", "digamma", "trigamma"):
            # poles sit exactly at the non-positive integers; sin(pi a) vanishes
            # there and a positive constant keeps a > 0 zero-free
            inner = as_fn(arg)

            def pole_mp(x):
                a = inner.mp(x)
                return mpf(1) if a > 0 else mp.sinpi(a)

            def pole_vec(xs):
                a = inner.vec(xs)
                with np.errstate(invalid="ignore"):
                    return np.where(a > 0, 1.0, np.sin(np.pi * a))

            return [("nonzero", Fn(pole_mp, pole_vec))]
    return []


def _apply_constraint(dom: IntervalDomain, kind: str, fn: Fn, scan: ScanPolicy):
    out, notes = [], []
    unresolved = False
    fm = _safe(fn.mp)
    for iv in dom.intervals:
        locus = zero_locus(fn, IntervalDomain((iv,)), scan)
        cuts = [b.root for b in locus.brackets]
        if iv.straddles_zero():
            v0 = fm(mpf(0))
            if v0 is not None and numerically_zero(v0):
                cuts.append(mpf(0))
        if not locus.resolution_ok:
            unresolved = True
            notes.extend(locus.notes)
        # zeros in the outermost scanned decade suggest infinitely many
        for lo, hi in locus.exhaustive_within:
            for r in cuts:
                if not lo <= r <= hi:
                    continue
                toward_inf = (r > 0 and not mp.isfinite(iv.b) and r > hi / 10) or (
                    r < 0 and not mp.isfinite(iv.a) and r < lo / 10
                )
                toward_zero = r != 0 and (iv.a == 0 or iv.b == 0 or iv.straddles_zero()) and (
                    abs(r) < 10 * min(abs(lo), abs(hi))
                )
                if toward_inf or toward_zero:
                    unresolved = True
        cuts = sorted(set(cuts), key=lambda v: v)
        pts = [iv.lo] + [Endpoint(c, "0" if c == 0 else "") for c in cuts if iv.a < c < iv.b] + [iv.hi]
        for p, q in zip(pts, pts[1:]):
            if not p.value < q.value:
                continue
            piece = Interval(p, q)
            if kind == "pos":
                v = fm(_interior_point(piece))
                if v is None or not v > 0:
                    continue
            out.append(piece)
    if unresolved:
        notes.append("constraint zeros could not be fully separated")
    return IntervalDomain(tuple(out), dom.unresolved or unresolved, dom.notes + tuple(notes))


def _interior_point(iv: Interval):
    a, b = iv.a, iv.b
    if mp.isfinite(a) and mp.isfinite(b):
        if a > 0:
            return mp.sqrt(a * b)
        if b < 0:
            return -mp.sqrt(a * b)
        return (a + b) / 2
    if mp.isfinite(a):
        return a + max(mpf(1), abs(a))
    if mp.isfinite(b):
        return b - max(mpf(1), abs(b))
    return mpf(1)


def natural_domain(f: ex.Expr, within=None, scan: ScanPolicy = DEFAULT_SCAN) -> IntervalDomain:
    """The part of ``within`` (default: the real line) where every node is defined."""
    within = IntervalDomain.real_line() if within is None else as_domain(within)
    return _nd(f, within, scan)


def _nd(e: ex.Expr, within: IntervalDomain, scan: ScanPolicy) -> IntervalDomain:
    d = within
    for c in ex.children(e):
        d = _nd(c, d, scan)
    for kind, fn in _constraints(e):
        d = _apply_constraint(d, kind, fn, scan)
    return d
