"""Built-in catalog of amenable and non-amenable functions, and its checker.

Entries live in ``data/catalog.tsv``.  Templated fields take integer and
real parameters; the defaults below are what every report uses unless told
otherwise, and each report echoes the instantiation it ran with.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from importlib import resources

from . import expr as ex
from .amenability import AmenabilityReport, amenability_report
from .conditioning import kappa, try_H
from .intervals import as_domain, parse_endpoint
from .refnum import INF, mp, mpf
from .roots import natural_domain
from .stability import sample_points

DEFAULT_PARAMS = {"k": 1, "k1": -1, "k2": 1, "a1": 1, "a2": -2, "al1": 0.5, "al2": 1.5}
KAPPA_POINTS = 1000
KAPPA_RTOL = mpf("1e-8")
H_SLACK = mpf("1.02")


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    source: str  # T1-n or T2-n
    expr_template: str
    domain_template: str
    kappa_template: str
    H_bound_template: str | None
    H_reference: str | None
    expected: str  # amenable | non-amenable
    failure: str | None  # item<n>@<end>
    proposition: str | None
    witness: str | None  # k*pi+pi/2 | k*pi

    @property
    def table(self) -> int:
        return int(self.source[1])

    @property
    def row(self) -> int:
        return int(self.source.split("-")[1])

    def instantiate(self, params: dict | None = None) -> "Instance":
        p = full_params(params)
        return Instance(
            self,
            p,
            ex.parse(self.expr_template.format(**p)),
            self.domain_template.format(**p),
            ex.parse(self.kappa_template.format(**p)),
            parse_endpoint(self.H_bound_template.format(**p)).value if self.H_bound_template else None,
        )


@dataclass(frozen=True)
class Instance:
    entry: CatalogEntry
    params: dict
    f: ex.Expr
    domain: str
    kappa_form: ex.Expr
    H_bound: object


def full_params(params: dict | None = None) -> dict:
    p = dict(DEFAULT_PARAMS)
    p.update(params or {})
    p["u"] = max(abs(p["k1"]), abs(p["k2"]))
    p["absk"] = abs(p["k"])
    return p


def _opt(v: str):
    return None if v.strip() in ("-", "") else v.strip()


def load_catalog(text: str | None = None) -> list[CatalogEntry]:
    if text is None:
        text = resources.files(__package__).joinpath("data/catalog.tsv").read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    out = []
    for row in csv.DictReader(io.StringIO("\n".join(lines)), delimiter="\t"):
        out.append(
            CatalogEntry(
                row["id"],
                row["source"],
                row["expr"],
                row["domain"],
                row["kappa"],
                _opt(row["H_bound"]),
                _opt(row["H_reference"]),
                row["expected"],
                _opt(row["failure"]),
                _opt(row["proposition"]),
                _opt(row["witness"]),
            )
        )
    return out


def list_entries(filter: str | None = None) -> list[CatalogEntry]:
    """All entries, or those matching 'amenable', 'non-amenable', an id or a source tag."""
    entries = load_catalog()
    if filter in (None, "", "all"):
        return entries
    if filter in ("amenable", "non-amenable"):
        return [e for e in entries if e.expected == filter]
    return [e for e in entries if filter in (e.id, e.source)]


def get_entry(key: str) -> CatalogEntry:
    hits = list_entries(key)
    if len(hits) != 1:
        raise KeyError(f"no catalog entry {key!r}")
    return hits[0]


# ---------------------------------------------------------------------------
# verification


@dataclass
class EntryReport:
    id: str
    source: str
    expr: str
    domain: str
    params: dict
    kappa_points: int = 0
    kappa_max_rel_err: object = mpf(0)
    H_sup: object = None
    H_bound: object = None
    H_reference: object = None
    verdict: str = ""
    expected: str = ""
    failures: list = field(default_factory=list)
    expected_failure: str | None = None
    propositions: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    problems: list = field(default_factory=list)
    amenability: AmenabilityReport | None = None

    @property
    def match(self) -> bool:
        return not self.problems

    def record(self) -> dict:
        def num(v):
            return None if v is None else ("inf" if v == INF else float(v))

        return {
            "id": self.id,
            "source": self.source,
            "expr": self.expr,
            "domain": self.domain,
            "params": self.params,
            "kappa_points": self.kappa_points,
            "kappa_max_rel_err": num(self.kappa_max_rel_err),
            "H_sup": num(self.H_sup),
            "H_bound": num(self.H_bound),
            "H_reference": num(self.H_reference),
            "verdict": self.verdict,
            "expected": self.expected,
            "failures": self.failures,
            "expected_failure": self.expected_failure,
            "propositions": self.propositions,
            "status": "match" if self.match else "mismatch",
            "problems": self.problems,
        }


def kappa_agreement(inst: Instance, n: int = KAPPA_POINTS, seed: int = 0):
    """Largest relative gap between kappa and the closed form over ~n samples."""
    nd = natural_domain(inst.f, as_domain(inst.domain))
    comps = max(1, len(nd.components()))
    xs = sample_points(nd, math.ceil(n / comps), seed)
    worst, count = mpf(0), 0
    for x in xs:
        try:
            k = kappa(inst.f, x)
            c = abs(ex.evaluate(inst.kappa_form, x))
        except (ex.DomainViolation, ZeroDivisionError, ValueError):
            continue
        count += 1
        if k == INF or not mp.isfinite(c):
            gap = mpf(0) if (k == INF and not mp.isfinite(c)) else INF
        else:
            gap = abs(k - c) / max(c, mpf("1e-30"))
        worst = max(worst, gap)
    return worst, count, xs


def sampled_H_sup(f: ex.Expr, xs, rep: AmenabilityReport | None = None):
    best = mpf(0)
    for x in xs:
        h = try_H(f, x)
        if h is not None and abs(h) > best:
            best = abs(h)
    if rep is not None:
        for c in rep.components:
            for r in c.items:
                if r.item == 2 and r.evidence is not None:
                    for h in r.evidence.Hs:
                        if h is not None and abs(h) > best:
                            best = abs(h)
    return best


def _same_end(a: str, b: str) -> bool:
    try:
        return abs(parse_endpoint(a).value - parse_endpoint(b).value) <= mpf("1e-20") * (1 + abs(parse_endpoint(b).value)) or (
            parse_endpoint(a).value == parse_endpoint(b).value
        )
    except ValueError:
        return a == b


def witness_fits(x, pattern: str, rel: float = 1e-12) -> bool:
    """Is x within ``rel`` (relative) of k*pi + pi/2 or k*pi for an integer k?"""
    shift = mp.pi / 2 if pattern == "k*pi+pi/2" else mpf(0)
    k = mp.nint((x - shift) / mp.pi)
    return abs(x - (k * mp.pi + shift)) <= mpf(rel) * abs(x)


def verify_entry(e: CatalogEntry, params: dict | None = None, seed: int = 0) -> EntryReport:
    inst = e.instantiate(params)
    rep = EntryReport(
        e.id, e.source, ex.to_text(inst.f), inst.domain, {k: inst.params[k] for k in sorted(inst.params)}
    )
    rep.expected = e.expected
    rep.expected_failure = e.failure
    label = f"row {e.source} ({e.id})"
    # (a) closed-form kappa
    worst, count, xs = kappa_agreement(inst, seed=seed)
    rep.kappa_points, rep.kappa_max_rel_err = count, worst
    if count < KAPPA_POINTS * 0.9:
        rep.problems.append(f"{label}: only {count} kappa sample points")
    if worst > KAPPA_RTOL:
        rep.problems.append(f"{label}: kappa closed form off by {mp.nstr(worst, 3)} (relative)")
    # (c) amenability verdict (run first: its endpoint evidence feeds the H sup)
    am = amenability_report(inst.f, inst.domain)
    rep.amenability = am
    rep.verdict = am.overall
    rep.propositions = [c.proposition for c in am.components]
    rep.failures = sorted({f"item{r.item}@{r.end}" for c in am.components for r in c.items if r.status == "fail"})
    # (b) H bound
    rep.H_sup = sampled_H_sup(inst.f, xs, am)
    rep.H_bound = inst.H_bound
    if inst.H_bound is not None and rep.H_sup > inst.H_bound * H_SLACK:
        rep.problems.append(f"{label}: sampled sup |H| {mp.nstr(rep.H_sup, 6)} exceeds bound {mp.nstr(inst.H_bound, 6)}")
    if e.H_reference is not None:
        rep.H_reference = mpf(e.H_reference)
        if abs(rep.H_sup - rep.H_reference) > mpf("0.01") * rep.H_reference:
            rep.problems.append(f"{label}: sampled sup |H| {mp.nstr(rep.H_sup, 6)} not within 1% of {e.H_reference[:8]}")
    if e.expected == "amenable":
        if am.overall != "supported":
            rep.problems.append(f"{label}: expected supported, got {am.overall}")
    else:
        if am.overall != "refuted":
            rep.problems.append(f"{label}: expected refuted, got {am.overall}")
        want_item, want_end = e.failure.split("@")
        hits = [
            r
            for c in am.components
            for r in c.items
            if r.status == "fail" and f"item{r.item}" == want_item and _same_end(r.end, want_end)
        ]
        if not hits:
            rep.problems.append(f"{label}: expected failure {e.failure}, got {rep.failures}")
        if e.witness:
            pts = [w[0] for r in hits if r.item == 1 for w in r.witnesses]
            rep.witnesses = pts
            if not pts or not all(witness_fits(x, e.witness) for x in pts):
                rep.problems.append(f"{label}: witnesses do not follow {e.witness}")
    return rep


def reproduce_tables(params: dict | None = None, seed: int = 0) -> list[EntryReport]:
    """One report per catalog row, in table order."""
    return [verify_entry(e, params, seed) for e in list_entries()]
