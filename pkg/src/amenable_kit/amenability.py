"""Numerical evidence for (and against) amenability of a univariate function.

A function f on an open set is amenable when there is C >= 1 such that for
every x the ball of radius 1/(C mu(f, x)) around x stays inside the set and
mu(f, y) <= C mu(f, x) on that ball.

Each connected component (split at 0, negative ones reflected through
f(-x)) is matched to one of four sufficient-condition templates:

    ab-bounded  (a, b),   0 < a < b < inf
    a-inf       (a, inf), 0 < a
    zero-b      (0, b)
    zero-inf    (0, inf)

and two items are checked at every end of the component:

    item 1  kappa -> inf at finite nonzero ends; toward 0 or inf, kappa -> inf
            along every sequence whose distance to the zero locus goes to 0
    item 2  limsup |H| < inf at every end

Checks return ``pass``, ``fail``, ``inconclusive``, ``void`` (nothing to
check, e.g. no zeros near 0 or inf) or ``shortcut`` (f extends analytically
across the end, which bounds H there).  None of this is a proof: reports say
``supported``, ``refuted`` (with a concrete witness against the definition)
or ``inconclusive``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .autodiff import eval_jet2, try_jet2
from .conditioning import _hg_from_jet, _kappa_from_jet
from .intervals import Endpoint, Interval, IntervalDomain, as_domain
from .metric import ball, dist_to_set
from .refnum import INF, mp, mpf, to_mpf
from .roots import DEFAULT_SCAN, ScanPolicy, geometric_grid, natural_domain, refine_bracket

PROPOSITIONS = ("ab-bounded", "a-inf", "zero-b", "zero-inf")
C_SWEEP = (10, 100, 1000, 10000)

TAIL = 17  # evidence points in the last four decades (4 per decade, inclusive)
ANCHOR_DECADES = 10
ZOOM_LEVELS = 9
WINDOW_POINTS = 400
H_STRIDE = 8
PER_WINDOW = 3
KAPPA_SLOPE = 0.45  # log-log growth rate of kappa that counts as divergence


class ComponentError(ValueError):
    pass


# ---------------------------------------------------------------------------
# templates


@dataclass(frozen=True)
class PropositionChoice:
    name: str
    reflected: bool
    positive: Interval  # the component moved into (0, inf)

    @property
    def label(self) -> str:
        return ("reflected+" if self.reflected else "") + self.name


def _positive_image(comp: Interval) -> tuple[Interval, bool]:
    if comp.straddles_zero():
        raise ComponentError(f"component {comp.render()} contains 0; split it first")
    if comp.a >= 0:
        return comp, False
    lo = Endpoint(-comp.b, _neg_text(comp.hi.text))
    hi = Endpoint(-comp.a, _neg_text(comp.lo.text))
    return Interval(lo, hi), True


def _neg_text(text):
    text = (text or "").strip()
    if not text or text == "0":
        return text
    if text.startswith("-") and not any(c in text[1:] for c in "+-"):
        return text[1:]
    if any(c in text for c in "+-"):
        return f"-({text})"
    return "-" + text


def select_proposition(comp: Interval) -> PropositionChoice:
    pos, refl = _positive_image(comp)
    a, b = pos.a, pos.b
    if a > 0:
        name = "ab-bounded" if mp.isfinite(b) else "a-inf"
    else:
        name = "zero-b" if mp.isfinite(b) else "zero-inf"
    return PropositionChoice(name, refl, pos)


def _ends(pos: Interval) -> list[str]:
    """End labels of a positive component: 'a', 'b', '0' or 'inf'."""
    out = ["0" if pos.a == 0 else "a"]
    out.append("b" if mp.isfinite(pos.b) else "inf")
    return out


# ---------------------------------------------------------------------------
# evidence along a sequence approaching one end


@dataclass
class EndpointEvidence:
    end: str  # a | b | 0 | inf
    xs: list
    distances: list  # relative distance to a finite end, None toward 0 / inf
    kappas: list  # None where f is not evaluable
    Hs: list

    @property
    def decades(self) -> float:
        xs = [abs(x) for x in self.xs]
        if self.distances[0] is not None:
            return float(mp.log10(self.distances[0] / self.distances[-1]))
        return float(abs(mp.log10(xs[-1] / xs[0])))


def evidence_points(pos: Interval, end: str) -> tuple[list, list]:
    """Points approaching ``end`` geometrically: at least 32 over 8+ decades."""
    a, b = pos.a, pos.b
    if end in ("a", "b"):
        room = mp.log(b / a) / 2 if mp.isfinite(b) and a > 0 else mpf("0.1")
        dmax = min(mpf("0.1"), room)
        ds = [dmax * mpf(10) ** (-mpf(k) / 4) for k in range(0, 33)]
        if end == "a":
            return [a * mp.exp(d) for d in ds], ds
        return [b * mp.exp(-d) for d in ds], ds
    if end == "0":
        s = min(b, mpf(1)) / 10
        return [s * mpf(10) ** (-mpf(j) / 4) for j in range(0, 49)], [None] * 49
    s = max(a, mpf(1)) * 10
    return [s * mpf(10) ** (mpf(j) / 4) for j in range(0, 49)], [None] * 49


def _kh(f: ex.Expr, x):
    j = try_jet2(f, x)
    if j is None:
        return None, None
    return _kappa_from_jet(x, j), _hg_from_jet(x, j)[0]


def endpoint_evidence(f: ex.Expr, pos: Interval, end: str) -> EndpointEvidence:
    xs, ds = evidence_points(pos, end)
    ks, hs = [], []
    for x in xs:
        k, h = _kh(f, x)
        ks.append(k)
        hs.append(h)
    return EndpointEvidence(end, xs, ds, ks, hs)


# ---------------------------------------------------------------------------
# item results


@dataclass
class ItemResult:
    item: int
    end: str
    status: str  # pass | fail | inconclusive | void | shortcut
    detail: str
    witnesses: list = field(default_factory=list)
    estimate: object = None  # limsup |H| estimate (item 2)
    evidence: EndpointEvidence | None = None

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "void", "shortcut")


def _slope(xs: list, ys: list) -> float:
    lx = np.array([float(mp.log10(v)) for v in xs])
    ly = np.array([float(mp.log10(v)) for v in ys])
    return float(np.polyfit(lx, ly, 1)[0])


def item1_finite(f: ex.Expr, pos: Interval, end: str) -> ItemResult:
    """kappa must diverge approaching a finite nonzero end."""
    ev = endpoint_evidence(f, pos, end)
    ks = ev.kappas
    if any(k is None for k in ks):
        return ItemResult(1, end, "inconclusive", "f is not evaluable along the approach", evidence=ev)
    if all(k == INF for k in ks[-TAIL:]):
        return ItemResult(1, end, "pass", "kappa is infinite near the end", evidence=ev)
    tail_k = ks[-TAIL:]
    tail_d = ev.distances[-TAIL:]
    if any(k == INF for k in tail_k):
        return ItemResult(1, end, "inconclusive", "zeros of f on the approach sequence", evidence=ev)
    increasing = all(q >= p * (1 - mpf("1e-12")) for p, q in zip(tail_k, tail_k[1:]))
    positive = all(k > 0 for k in tail_k)
    slope = _slope([1 / d for d in tail_d], tail_k) if positive else 0.0
    last = tail_k[-1]
    if increasing and slope >= KAPPA_SLOPE and last >= 100:
        return ItemResult(
            1, end, "pass", f"kappa grows like d^-{slope:.3g}, reaching {mp.nstr(last, 6)}", evidence=ev
        )
    if max(tail_k) <= mpf("1.5") * max(min(tail_k), mpf(1)):
        wit = [(x, k, d) for x, k, d in zip(ev.xs[-TAIL:], tail_k, tail_d)]
        return ItemResult(
            1, end, "fail", f"kappa stays near {mp.nstr(last, 6)} as the distance to the end goes to 0", wit, evidence=ev
        )
    return ItemResult(1, end, "inconclusive", f"kappa trend unclear (slope {slope:.3g})", evidence=ev)


def extends_across(f: ex.Expr, e, rel: float = 1e-3, scan: ScanPolicy | None = None) -> bool:
    """Does f stay analytic on a neighbourhood of the point e?"""
    e = to_mpf(e)
    if e == 0:
        lo, hi = mpf(-rel), mpf(rel)
    else:
        lo, hi = sorted((e * mp.exp(-mpf(rel)), e * mp.exp(mpf(rel))))
    scan = scan or ScanPolicy(samples_per_decade=2000, decades=8, rel_tol=1e-24)
    try:
        nd = natural_domain(f, IntervalDomain.of((lo, hi)), scan)
    except (ex.DomainViolation, ZeroDivisionError, ValueError):
        return False
    if nd.unresolved or len(nd) != 1:
        return False
    iv = nd.intervals[0]
    if not (iv.a == lo and iv.b == hi):
        return False
    return try_jet2(f, e) is not None


def _plateau(values: list, tail: int):
    """('pass', sup) if the running max settles, ('fail', None) if it keeps growing."""
    early = [v for v in values[:-tail] if v is not None]
    late = [v for v in values[-tail:] if v is not None]
    if not late or not early:
        return "inconclusive", None
    if any(v == INF for v in late):
        return "fail", None
    m_early, m_late = max(early), max(late)
    if m_late <= mpf("1.01") * m_early + mpf("1e-12"):
        return "pass", max(m_early, m_late)
    grow = all(q > p for p, q in zip(late, late[1:]))
    if grow and late[-1] >= 2 * late[0]:
        return "fail", None
    return "inconclusive", None


def item2_finite(f: ex.Expr, pos: Interval, end: str) -> ItemResult:
    e = pos.a if end == "a" else pos.b
    ev = endpoint_evidence(f, pos, end)
    habs = [None if h is None else abs(h) for h in ev.Hs]
    est = max((h for h in habs if h is not None), default=None)
    if extends_across(f, e):
        return ItemResult(2, end, "shortcut", "f extends analytically across the end", estimate=est, evidence=ev)
    status, sup = _plateau(habs, TAIL)
    if status == "pass":
        return ItemResult(2, end, "pass", f"|H| settles at {mp.nstr(sup, 6)}", estimate=sup, evidence=ev)
    if status == "fail":
        wit = [(x, h, d) for x, h, d in zip(ev.xs[-TAIL:], ev.Hs[-TAIL:], ev.distances[-TAIL:])]
        return ItemResult(2, end, "fail", "|H| grows without bound approaching the end", wit, evidence=ev)
    return ItemResult(2, end, "inconclusive", "|H| neither settles nor clearly diverges", estimate=est, evidence=ev)


# ---------------------------------------------------------------------------
# behaviour toward 0 or infinity: zoom windows at geometric anchors


@dataclass
class CriticalPoint:
    x: object
    kappa: object
    H: object
    dist: object  # relative distance to the nearest zero found nearby


@dataclass
class AnchorScan:
    anchor: object
    zeros: list
    critical: list
    H_max: object
    H_arg: object


def anchors(pos: Interval, end: str, count: int = ANCHOR_DECADES) -> list:
    if end == "inf":
        s = max(pos.a, mpf(1))
        return [s * mpf(10) ** j for j in range(1, count + 1)]
    s = min(pos.b, mpf(1))
    return [s * mpf(10) ** (-j) for j in range(1, count + 1)]


def _f_mp(f):
    def g(x):
        return ex.evaluate(f, x)

    return g


def _d1(f):
    def g(x):
        return eval_jet2(f, x).d1

    return g


def scan_anchor(f: ex.Expr, A) -> AnchorScan:
    """Zeros, critical points and the largest |H| in nested windows [A, A e^w]."""
    A = to_mpf(A)
    zeros, crits = [], []
    hmax, harg = mpf(0), None
    seen = set()
    for i in range(ZOOM_LEVELS):
        w = 2.302585092994046 * 10.0**-i
        grid = geometric_grid(float(A), float(A * mp.exp(w)), int(WINDOW_POINTS / (w / 2.302585092994046)))
        grid = grid[np.linspace(0, len(grid) - 1, WINDOW_POINTS).astype(int)] if len(grid) > WINDOW_POINTS else grid
        with np.errstate(all="ignore"):
            vals = ex.evaluate_float(f, grid)
            fin = np.isfinite(vals)
            s = np.sign(vals)
            sc = np.nonzero(fin[:-1] & fin[1:] & (s[:-1] * s[1:] < 0))[0][:PER_WINDOW]
            dv = np.diff(vals)
            ext = np.nonzero(fin[:-2] & fin[1:-1] & fin[2:] & (np.sign(dv[:-1]) * np.sign(dv[1:]) < 0))[0][:PER_WINDOW]
        for k in range(0, len(grid), H_STRIDE):
            _, h = _kh(f, mpf(float(grid[k])))
            if h is not None and abs(h) > hmax:
                hmax, harg = abs(h), mpf(float(grid[k]))
        for k in sc:
            l, r = mpf(float(grid[k])), mpf(float(grid[k + 1]))
            try:
                fl, fr = ex.evaluate(f, l), ex.evaluate(f, r)
                _, _, z = refine_bracket(_f_mp(f), l, r, fl, fr, rel_tol=1e-30)
                fz = ex.evaluate(f, z)
            except (ex.DomainViolation, ZeroDivisionError, ValueError):
                continue
            if abs(fz) > max(abs(fl), abs(fr)):
                continue  # a pole, not a zero
            key = mp.nstr(z, 20)
            if key not in seen:
                seen.add(key)
                zeros.append(z)
        for k in ext:
            l, r = mpf(float(grid[k])), mpf(float(grid[k + 2]))
            try:
                dl, dr = _d1(f)(l), _d1(f)(r)
                if dl == 0 or dr == 0 or (dl > 0) == (dr > 0):
                    continue
                _, _, c = refine_bracket(_d1(f), l, r, dl, dr, rel_tol=1e-30)
            except (ex.DomainViolation, ZeroDivisionError, ValueError):
                continue
            k_, h_ = _kh(f, c)
            if k_ is None:
                continue
            crits.append(CriticalPoint(c, k_, h_, None))
            if h_ is not None and abs(h_) > hmax:
                hmax, harg = abs(h_), c
        if len(sc) == 0 and len(ext) == 0:
            break
    for cp in crits:
        cp.dist = dist_to_set(cp.x, zeros)
    return AnchorScan(A, zeros, crits, hmax, harg)


@dataclass
class DirectionScan:
    end: str
    scans: list

    @property
    def zeros(self) -> list:
        return [z for s in self.scans for z in s.zeros]


def scan_direction(f: ex.Expr, pos: Interval, end: str) -> DirectionScan:
    return DirectionScan(end, [scan_anchor(f, A) for A in anchors(pos, end)])


def item1_direction(f: ex.Expr, ds: DirectionScan) -> ItemResult:
    end = ds.end
    if not ds.zeros:
        return ItemResult(1, end, "void", "no zeros of f near any anchor")
    if not any(s.zeros for s in ds.scans[-3:]):
        return ItemResult(1, end, "void", "the zeros of f stay away from the end")
    seq = []
    for s in ds.scans:
        cands = [c for c in s.critical if c.kappa != INF and c.dist != INF]
        if cands:
            best = min(cands, key=lambda c: c.dist)
            seq.append(best)
    if len(seq) >= 4:
        tail = seq[-4:]
        dists = [c.dist for c in tail]
        kap = [c.kappa for c in tail]
        shrinking = all(q < p for p, q in zip(dists, dists[1:])) and dists[-1] < mpf("1e-3")
        shrinking = shrinking and dists[-1] <= seq[0].dist / 100
        early = max([c.kappa for c in seq[: len(seq) // 2]] + [mpf(1)])
        if shrinking and max(kap) <= 2 * early:
            wit = [(c.x, c.kappa, c.dist) for c in seq]
            return ItemResult(
                1,
                end,
                "fail",
                f"kappa stays bounded (<= {mp.nstr(max(kap), 4)}) at points whose distance to the zeros goes to 0",
                wit,
            )
    # no bounded sequence found: check divergence next to the outermost zeros
    probes = []
    for s in ds.scans[-3:]:
        for z in s.zeros[:2]:
            for side in (1, -1):
                ks = []
                for j in range(2, 9):
                    x = z * mp.exp(side * mpf(10) ** -j)
                    k, _ = _kh(f, x)
                    ks.append(k)
                probes.append((z, side, ks))
    bad = [p for p in probes if any(k is None for k in p[2])]
    if bad:
        return ItemResult(1, end, "inconclusive", "f not evaluable next to a zero")
    div = all(p[2][-1] >= 100 and all(q >= p_ for p_, q in zip(p[2], p[2][1:])) for p in probes)
    if div:
        return ItemResult(1, end, "pass", f"kappa diverges next to {len(probes) // 2} outer zeros")
    return ItemResult(1, end, "inconclusive", "kappa next to the outer zeros does not clearly diverge")


def check_item1(f: ex.Expr, comp: Interval, locus=None) -> list:
    """Item 1 at both ends of ``comp``.

    ``locus`` is accepted for callers that already hold a zero scan; the
    ends toward 0 and infinity are rescanned at growing magnification, which
    is what the sequence condition needs.
    """
    choice = select_proposition(comp)
    g = ex.reflect(f) if choice.reflected else f
    out = []
    for end in _ends(choice.positive):
        if end in ("a", "b"):
            r = item1_finite(g, choice.positive, end)
        else:
            r = item1_direction(g, scan_direction(g, choice.positive, end))
        r.end = _original_end(comp, choice, r.end)
        out.append(r)
    return out


def check_item2(f: ex.Expr, comp: Interval) -> list:
    choice = select_proposition(comp)
    g = ex.reflect(f) if choice.reflected else f
    out = []
    for end in _ends(choice.positive):
        if end in ("a", "b"):
            r = item2_finite(g, choice.positive, end)
        else:
            r = item2_direction(g, choice.positive, scan_direction(g, choice.positive, end))
        r.end = _original_end(comp, choice, r.end)
        out.append(r)
    return out


def item2_direction(f: ex.Expr, pos: Interval, ds: DirectionScan) -> ItemResult:
    end = ds.end
    ms = [s.H_max for s in ds.scans]
    est = max(ms, default=None)
    if end == "0" and extends_across(f, 0):
        return ItemResult(2, end, "shortcut", "f extends analytically across 0", estimate=est)
    status, sup = _plateau(ms, 4)
    if status == "pass":
        return ItemResult(2, end, "pass", f"|H| settles at {mp.nstr(sup, 6)}", estimate=sup)
    if status == "fail":
        wit = [(s.H_arg, s.H_max, None) for s in ds.scans]
        return ItemResult(2, end, "fail", "the largest |H| per decade keeps growing", wit)
    return ItemResult(2, end, "inconclusive", "|H| neither settles nor clearly diverges", estimate=est)


# ---------------------------------------------------------------------------
# refutation against the definition itself


@dataclass(frozen=True)
class DefinitionWitness:
    C: object
    x: object
    y: object
    reason: str  # "ball leaves the domain" | "mu(y) > C mu(x)" | "zero of f inside the ball"
    margin: object = None  # for escapes: distance from y to the end, relative


def falsify_ball_escape(f: ex.Expr, comp: Interval, C_sweep=C_SWEEP) -> dict:
    """For each C, an x whose ball of radius 1/(C mu(x)) leaves ``comp``.

    Candidates approach every finite nonzero end at x = e (1 +- C^-4) and at
    relative distances 10^-k.
    """
    pos, refl = _positive_image(comp)
    g = ex.reflect(f) if refl else f
    out = {}
    for C in C_sweep:
        C = mpf(C)
        for end in _ends(pos):
            if end not in ("a", "b"):
                continue
            e = pos.a if end == "a" else pos.b
            sgn = 1 if end == "a" else -1
            cands = [e * (1 + sgn * C**-4)] + [e * mp.exp(sgn * mpf(10) ** -k) for k in range(1, 17)]
            for x in cands:
                if not pos.contains(x):
                    continue
                k, _ = _kh(g, x)
                if k is None or k == INF:
                    continue
                r = 1 / (C * (1 + k))
                bl = ball(x, r)
                if not bl.within(pos.a, pos.b):
                    y = bl.lo if end == "a" else bl.hi
                    margin = (e - y) / e if end == "a" else (y - e) / e
                    xo, yo = (-x, -y) if refl else (x, y)
                    out[int(C)] = DefinitionWitness(C, xo, yo, "ball leaves the domain", margin)
                    break
            if int(C) in out:
                break
    return out


def _mu_blowup(g: ex.Expr, x, C, zeros=(), n: int = 65):
    k, _ = _kh(g, x)
    if k is None or k == INF:
        return None
    mux = 1 + k
    r = 1 / (C * mux)
    bl = ball(x, r)
    for z in zeros:
        if bl.contains(z):
            return z, "zero of f inside the ball"
    prev = None
    for i in range(n):
        y = bl.lo * mp.exp(2 * r * mpf(i + 1) / (n + 1))
        j = try_jet2(g, y)
        if j is None:
            return y, "f undefined inside the ball"
        ky = _kappa_from_jet(y, j)
        if 1 + ky > C * mux:
            return y, "mu(y) > C mu(x)"
        if prev is not None and (prev.v > 0) != (j.v > 0):
            return y, "zero of f inside the ball"
        prev = j
    return None


def falsify_mu_blowup(f: ex.Expr, comp: Interval, candidates, zeros=(), C_sweep=C_SWEEP) -> dict:
    pos, refl = _positive_image(comp)
    g = ex.reflect(f) if refl else f
    out = {}
    for C in C_sweep:
        for x in candidates:
            hit = _mu_blowup(g, x, mpf(C), zeros)
            if hit is not None:
                y, why = hit
                out[int(C)] = DefinitionWitness(mpf(C), -x if refl else x, -y if refl else y, why)
                break
    return out


def check_definition_direct(f: ex.Expr, comp: Interval, C, xs, n: int = 33) -> list:
    """Both conditions of the definition at each x in ``xs``; returns the failures."""
    pos, refl = _positive_image(comp)
    g = ex.reflect(f) if refl else f
    C = mpf(C)
    fails = []
    for x in xs:
        xp = -to_mpf(x) if refl else to_mpf(x)
        k, _ = _kh(g, xp)
        if k is None:
            continue
        if k == INF:
            continue
        r = 1 / (C * (1 + k))
        bl = ball(xp, r)
        if not bl.within(pos.a, pos.b):
            fails.append(DefinitionWitness(C, x, None, "ball leaves the domain"))
            continue
        hit = _mu_blowup(g, xp, C, (), n)
        if hit is not None:
            y, why = hit
            fails.append(DefinitionWitness(C, x, -y if refl else y, why))
    return fails


# ---------------------------------------------------------------------------
# reports


@dataclass
class ComponentReport:
    interval: str
    proposition: str
    items: list
    overall: str  # supported | refuted | inconclusive
    witnesses: dict = field(default_factory=dict)  # C -> DefinitionWitness
    notes: list = field(default_factory=list)

    def item(self, number: int) -> list:
        return [r for r in self.items if r.item == number]

    @property
    def failed_items(self) -> list:
        return sorted({r.item for r in self.items if r.status == "fail"})

    @property
    def H_estimate(self):
        vals = [r.estimate for r in self.items if r.item == 2 and r.estimate is not None]
        return max(vals) if vals else None


@dataclass
class AmenabilityReport:
    expr: str
    domain: str
    components: list
    notes: list = field(default_factory=list)

    @property
    def overall(self) -> str:
        return combine_verdicts([c.overall for c in self.components])

    @property
    def failed_items(self) -> list:
        return sorted({i for c in self.components for i in c.failed_items})


def combine_verdicts(verdicts) -> str:
    verdicts = list(verdicts)
    if not verdicts:
        return "inconclusive"
    if "refuted" in verdicts:
        return "refuted"
    if "inconclusive" in verdicts:
        return "inconclusive"
    return "supported"


def combine_union(reports) -> AmenabilityReport:
    """A finite union is amenable exactly when every piece is."""
    reports = list(reports)
    comps = [c for r in reports for c in r.components]
    expr = reports[0].expr if reports else ""
    dom = " U ".join(r.domain for r in reports)
    return AmenabilityReport(expr, dom, comps, [n for r in reports for n in r.notes])


def analyze_component(f: ex.Expr, comp: Interval) -> ComponentReport:
    choice = select_proposition(comp)
    pos = choice.positive
    g = ex.reflect(f) if choice.reflected else f
    items: list[ItemResult] = []
    candidates, zeros = [], []
    for end in _ends(pos):
        if end in ("a", "b"):
            items.append(item1_finite(g, pos, end))
            items.append(item2_finite(g, pos, end))
        else:
            ds = scan_direction(g, pos, end)
            r1 = item1_direction(g, ds)
            r2 = item2_direction(g, pos, ds)
            items += [r1, r2]
            zeros += ds.zeros
            if not (r1.ok and r2.ok):
                for s in ds.scans:
                    candidates += [c.x for c in s.critical]
                    if s.H_arg is not None:
                        candidates.append(s.H_arg)
    for r in items:
        r.end = _original_end(comp, choice, r.end)
    rep = ComponentReport(comp.render(), choice.label, items, "supported")
    if all(r.ok for r in items):
        return rep
    wit = falsify_ball_escape(f, comp)
    if len(wit) < len(C_SWEEP):
        for r in items:
            if r.status == "fail" and r.evidence is not None:
                candidates += list(r.evidence.xs)
        candidates.sort(key=lambda x: -abs(x))
        more = falsify_mu_blowup(f, comp, [-x if choice.reflected else x for x in candidates], [-z if choice.reflected else z for z in zeros])
        for C, w in more.items():
            wit.setdefault(C, w)
    rep.witnesses = dict(sorted(wit.items()))
    if len(wit) == len(C_SWEEP):
        rep.overall = "refuted"
    else:
        rep.overall = "inconclusive"
        if any(r.status == "fail" for r in items):
            rep.notes.append("a sufficient condition fails but no counterexample to the definition was found")
    return rep


def _original_end(comp: Interval, choice: PropositionChoice, end: str) -> str:
    """Render the end label in the coordinates of the original component."""
    if end in ("0", "inf") and not choice.reflected:
        return end
    if end == "0":
        return "0"
    if end == "inf":
        return "-inf"
    src = comp.lo if (end == "a") != choice.reflected else comp.hi
    return src.render()


def amenability_report(f: ex.Expr, dom=None, scan: ScanPolicy = DEFAULT_SCAN) -> AmenabilityReport:
    """Check every component of the natural domain of f inside ``dom``."""
    within = as_domain(dom) if dom is not None else None
    nd = natural_domain(f, within, scan)
    rep = AmenabilityReport(ex.to_text(f), nd.render(), [], list(nd.notes))
    if nd.unresolved:
        rep.notes.append("natural domain not fully resolved; verdicts cover the listed components only")
    for comp in nd.components():
        rep.components.append(analyze_component(f, comp))
    if nd.unresolved:
        for c in rep.components:
            if c.overall == "supported":
                c.overall = "inconclusive"
    return rep
