"""Compatibility of a pair (g, h) through the bounded-ratio test.

    A(x) = (kappa(h, x) + kappa(g, h(x))) / (1 + kappa(g o h, x))
    B(x) = mu(g, h(x)) * mu(h, x) / mu(g o h, x)

both with inf / inf = 1.  Boundedness of A implies boundedness of B, i.e.
compatibility.  Every evaluated point is classified into one of four cases:

1. x = 0
2. x != 0 and g(h(x)) = 0
3. x != 0, h(x) != 0, g(h(x)) != 0      (here B = 1 + A exactly)
4. x != 0, h(x) = 0, g(h(x)) != 0       (forces A = inf)
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from . import expr as ex
from .autodiff import eval_jet2
from .conditioning import _kappa_from_jet, inf_safe_ratio
from .intervals import Interval, as_domain
from .refnum import INF, mp, mpf, to_mpf
from .roots import COARSE_SCAN, Fn, zero_locus


@dataclass(frozen=True)
class RatioPoint:
    x: object
    case: int
    k_h: object
    k_g: object
    k_gh: object
    A: object
    B: object


def ratio_point(g: ex.Expr, h: ex.Expr, x, gh: ex.Expr | None = None) -> RatioPoint:
    x = to_mpf(x)
    gh = gh if gh is not None else ex.substitute(g, h)
    hj = eval_jet2(h, x)
    hx = mpf(0) if hj.vanishes else hj.v
    gj = eval_jet2(g, hx)
    ghj = eval_jet2(gh, x)
    k_h = _kappa_from_jet(x, hj)
    k_g = _kappa_from_jet(hx, gj)
    k_gh = _kappa_from_jet(x, ghj)
    gh_zero = ghj.v == 0 or ghj.vanishes
    if x == 0:
        case = 1
    elif gh_zero:
        case = 2
    elif hx != 0:
        case = 3
    else:
        case = 4
    num = INF if (k_h == INF or k_g == INF) else k_h + k_g
    A = inf_safe_ratio(num, 1 + k_gh)
    B = inf_safe_ratio(_mul_ext(1 + k_g, 1 + k_h), 1 + k_gh)
    return RatioPoint(x, case, k_h, k_g, k_gh, A, B)


def _mul_ext(a, b):
    return INF if (a == INF or b == INF) else a * b


def A_ratio(g: ex.Expr, h: ex.Expr, x):
    return ratio_point(g, h, x).A


def B_ratio(g: ex.Expr, h: ex.Expr, x):
    return ratio_point(g, h, x).B


@dataclass
class CompatReport:
    g: str
    h: str
    domain: str
    sup_A: object
    sup_B: object
    verdict: str  # supported | refuted | inconclusive
    witness: list = field(default_factory=list)  # [(x, A)] along a diverging probe sequence
    case_log: dict = field(default_factory=dict)
    identity_max_gap: object = mpf(0)  # max |B - (1 + A)| / (1 + A) over case 3
    eq1_violations: int = 0
    image_violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    points: list = field(default_factory=list)


def _derivative_fn(f: ex.Expr) -> Fn:
    import numpy as np

    def vec(xs):
        xs = np.asarray(xs, dtype=float)
        s = 1e-7 * np.maximum(np.abs(xs), 1e-300)
        return (ex.evaluate_float(f, xs + s) - ex.evaluate_float(f, xs - s)) / (2 * s)

    return Fn(lambda x: eval_jet2(f, x).d1, vec)


def probe_sequences(comp: Interval, targets=(), n: int = 40) -> list[list]:
    """Sequences approaching each end of ``comp`` and each target point.

    Steps halve the relative distance each time, so the j-th point of a
    sequence toward +-inf is +-2**j.
    """
    seqs = []
    a, b = comp.a, comp.b
    sign = 1 if a >= 0 else -1
    for e, inward in ((a, 1), (b, -1)):
        if not mp.isfinite(e):
            seqs.append([sign * mp.ldexp(mpf(1), j) for j in range(1, n + 1)])
        elif e == 0:
            seqs.append([sign * mp.ldexp(mpf(1), -j) for j in range(1, n + 1)])
        else:
            seq = [e * mp.exp(inward * sign * mp.ldexp(mpf(1), -j)) for j in range(1, n + 1)]
            seqs.append([x for x in seq if comp.contains(x)])
    for z in targets:
        for side in (1, -1):
            seq = [z * mp.exp(side * mp.ldexp(mpf(1), -j)) for j in range(2, n + 1)]
            seqs.append([x for x in seq if comp.contains(x)])
    return [s for s in seqs if s]


STEADY_TAIL = 20
STEADY_RATIO = 0.75  # late/early mean increment; increments like j^-p with p < 0.85 pass


def _diverges(values: list) -> bool:
    """Does A grow without bound along a probe sequence?

    Geometric growth is caught by doubling over the last ten points.  Slow
    (logarithmic in |x|) growth shows as increments that do not shrink: the
    probes are geometric in x, so such growth is near-linear in the index.
    """
    finite = [v for v in values if v != INF]
    if len(values) >= 1 and values[-1] == INF:
        return True
    tail = finite[-10:]
    if len(tail) < 6:
        return False
    increasing = all(q > p for p, q in zip(tail, tail[1:]))
    if increasing and tail[-1] >= 2 * tail[0] and tail[-1] > 10:
        return True
    tail = finite[-STEADY_TAIL:]
    if len(tail) < STEADY_TAIL or not all(q > p for p, q in zip(tail, tail[1:])):
        return False
    steps = [q - p for p, q in zip(tail, tail[1:])]
    early, late = sum(steps[:5]) / 5, sum(steps[-5:]) / 5
    return tail[-1] - tail[0] >= 1 and late >= STEADY_RATIO * early


def check_compatible(g: ex.Expr, h: ex.Expr, dom, samples=None, n: int = 128, seed: int = 0) -> CompatReport:
    """Estimate sup A and sup B over ``dom`` and look for diverging sequences."""
    from .stability import sample_points

    dom = as_domain(dom)
    gh = ex.substitute(g, h)
    report = CompatReport(ex.to_text(g), ex.to_text(h), dom.render(), mpf(0), mpf(0), "supported")
    cases: Counter = Counter()
    xs = list(samples) if samples is not None else sample_points(dom, n, seed)
    seqs: list[list] = []
    for comp in dom.components():
        targets = []
        for fn in (h, gh):
            try:
                targets += zero_locus(fn, comp, COARSE_SCAN).roots
            except Exception:  # scans are best effort; probes are extra evidence
                report.notes.append(f"zero scan of {ex.to_text(fn)} failed on {comp.render()}")
        try:
            targets += zero_locus(_derivative_fn(h), comp, COARSE_SCAN).roots
        except Exception:
            report.notes.append(f"critical point scan failed on {comp.render()}")
        seqs += probe_sequences(comp, targets[:64])

    def visit(x):
        try:
            p = ratio_point(g, h, x, gh)
        except (ex.DomainViolation, ZeroDivisionError, ValueError) as exc:
            report.image_violations.append((x, str(exc)))
            return None
        cases[p.case] += 1
        report.points.append(p)
        if p.A > report.sup_A:
            report.sup_A = p.A
        if p.B > report.sup_B:
            report.sup_B = p.B
        if p.case == 3 and p.A != INF and p.B != INF:
            gap = abs(p.B - (1 + p.A)) / (1 + p.A)
            if gap > report.identity_max_gap:
                report.identity_max_gap = gap
        if p.case == 4 and p.A != INF:
            report.notes.append(f"case 4 with finite A at x={mp.nstr(x, 12)}")
        if p.k_gh != INF and p.k_h != INF and p.k_g != INF and p.x != 0:
            if p.k_gh > p.k_g * p.k_h * (1 + mpf("1e-10")) + mpf("1e-30"):
                report.eq1_violations += 1
        return p

    for x in xs:
        visit(x)
    for seq in seqs:
        vals = []
        pts = []
        for x in seq:
            p = visit(x)
            if p is None:
                continue
            vals.append(p.A)
            pts.append((x, p.A))
        if _diverges(vals) and report.verdict != "refuted":
            report.verdict = "refuted"
            report.witness = pts
    if report.verdict != "refuted" and report.sup_A == INF:
        report.verdict = "inconclusive"
        report.notes.append("A is infinite at an isolated sample")
    report.case_log = {k: cases.get(k, 0) for k in (1, 2, 3, 4)}
    return report
