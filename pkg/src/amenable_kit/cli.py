"""Command-line front end.

    amenable-kit analyze    --expr "exp(x)" --x 2
    amenable-kit analyze    --expr "tan(x)" --domain "(-pi/2, pi/2)" --format csv
    amenable-kit amenable   --expr "sin(x)" --domain "(0, pi)"
    amenable-kit compatible --g "x^2" --h "x^3" --domain "(0, inf)"
    amenable-kit stability  --expr "exp(x)" --domain "[-10, 10]" --kind forward
    amenable-kit tables

Exit status: 0 when nothing was refuted or violated, 1 when something was,
2 for usage and parse errors.  With ``--out`` the report goes to that file
and a figure with the same stem (``.png``) is written next to it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import expr as ex
from .intervals import DomainSyntaxError, as_domain, parse_endpoint
from .refnum import INF, fmt, mpf

SCHEMA = "amenable-kit/1"


@dataclass
class RunConfig:
    command: str
    expressions: dict = field(default_factory=dict)
    domain: str | None = None
    x: str | None = None
    t_set: list = field(default_factory=list)
    samples: int = 0
    seed: int = 0
    format: str = "human"
    out: str | None = None
    kind: str | None = None


class UsageError(Exception):
    pass


def _num(v):
    """JSON-friendly rendering of an extended real, stable across runs."""
    if v is None:
        return None
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return v
    return fmt(v)


def _t_set(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out or min(out) < 2:
        raise UsageError(f"bad precision set {text!r}")
    return out


# ---------------------------------------------------------------------------
# commands: each returns (payload dict, human text, csv rows or None, exit code, plot callback)


def cmd_analyze(cfg: RunConfig):
    from .conditioning import cond_report
    from .roots import natural_domain
    from .stability import sample_points

    f = ex.parse(cfg.expressions["f"])
    if cfg.x is not None:
        try:
            xs = [parse_endpoint(cfg.x).value]
        except ValueError as exc:
            raise UsageError(f"bad --x: {exc}") from exc
    else:
        if cfg.domain is None:
            raise UsageError("analyze needs --x or --domain")
        nd = natural_domain(f, as_domain(cfg.domain))
        xs = sample_points(nd, cfg.samples, cfg.seed)
    rows = []
    for x in xs:
        try:
            rows.append(cond_report(f, x))
        except (ex.DomainViolation, ZeroDivisionError, ValueError) as exc:
            if len(xs) == 1:
                raise UsageError(str(exc)) from exc
    cols = ("x", "f", "fprime", "fsecond", "kappa", "mu", "H", "G")
    table = [{c: _num(getattr(r, c)) for c in cols} for r in rows]
    hmax = max((abs(r.H) for r in rows if r.H is not None), default=None)
    payload = {"rows": table, "max_abs_H": _num(hmax)}
    lines = [f"f(x) = {ex.to_text(f)}"]
    for r in table[:40]:
        lines.append("  " + "  ".join(f"{c}={r[c]}" for c in cols))
    if len(table) > 40:
        lines.append(f"  ... {len(table) - 40} more rows")
    if hmax is not None:
        lines.append(f"max |H| = {fmt(hmax, 8)}")

    def plot(path):
        from .plotting import plot_sweep

        return plot_sweep(rows, path, ex.to_text(f))

    return payload, "\n".join(lines), (list(cols), [[r[c] for c in cols] for r in table]), 0, plot


def _item_dict(r):
    d = {"item": r.item, "end": r.end, "status": r.status, "detail": r.detail}
    if r.estimate is not None:
        d["estimate"] = _num(r.estimate)
    if r.witnesses:
        d["witnesses"] = [[_num(v) for v in w] for w in r.witnesses[:12]]
    return d


def cmd_amenable(cfg: RunConfig):
    from .amenability import amenability_report

    f = ex.parse(cfg.expressions["f"])
    rep = amenability_report(f, cfg.domain)
    comps = []
    lines = [f"f(x) = {rep.expr} on {rep.domain}: {rep.overall}"]
    for c in rep.components:
        wit = {
            str(C): {"x": _num(w.x), "y": _num(w.y), "reason": w.reason, "margin": _num(w.margin)}
            for C, w in c.witnesses.items()
        }
        comps.append(
            {
                "interval": c.interval,
                "proposition": c.proposition,
                "overall": c.overall,
                "items": [_item_dict(r) for r in c.items],
                "witnesses": wit,
                "notes": c.notes,
            }
        )
        lines.append(f"  {c.interval}  [{c.proposition}]  {c.overall}")
        for r in c.items:
            lines.append(f"    item {r.item} at {r.end}: {r.status}  ({r.detail})")
        for C, w in c.witnesses.items():
            lines.append(f"    C={C}: x={fmt(w.x, 12)} y={fmt(w.y, 12)}  {w.reason}")
        for n in c.notes:
            lines.append(f"    note: {n}")
    for n in rep.notes:
        lines.append(f"  note: {n}")
    payload = {"expr": rep.expr, "domain": rep.domain, "overall": rep.overall, "components": comps, "notes": rep.notes}
    rows = [
        [c["interval"], c["proposition"], r["item"], r["end"], r["status"], c["overall"]]
        for c in comps
        for r in c["items"]
    ]

    def plot(path):
        from .plotting import plot_evidence

        return plot_evidence(rep, path)

    code = 1 if rep.overall == "refuted" else 0
    return payload, "\n".join(lines), (["interval", "proposition", "item", "end", "status", "overall"], rows), code, plot


def cmd_compatible(cfg: RunConfig):
    from .compatibility import check_compatible

    g = ex.parse(cfg.expressions["g"])
    h = ex.parse(cfg.expressions["h"])
    if cfg.domain is None:
        raise UsageError("compatible needs --domain")
    rep = check_compatible(g, h, cfg.domain, n=cfg.samples, seed=cfg.seed)
    payload = {
        "g": rep.g,
        "h": rep.h,
        "domain": rep.domain,
        "verdict": rep.verdict,
        "sup_A": _num(rep.sup_A),
        "sup_B": _num(rep.sup_B),
        "case_log": {str(k): v for k, v in rep.case_log.items()},
        "case3_identity_max_gap": _num(rep.identity_max_gap),
        "composition_law_violations": rep.eq1_violations,
        "image_violations": len(rep.image_violations),
        "witness": [[_num(x), _num(a)] for x, a in rep.witness],
        "notes": rep.notes,
    }
    lines = [
        f"g(y) = {rep.g}, h(x) = {rep.h} on {rep.domain}: {rep.verdict}",
        f"  sup A = {fmt(rep.sup_A, 10)}   sup B = {fmt(rep.sup_B, 10)}",
        f"  cases: {rep.case_log}   case-3 max |B-(1+A)|/(1+A) = {fmt(rep.identity_max_gap, 3)}",
    ]
    if rep.image_violations:
        lines.append(f"  {len(rep.image_violations)} points outside the domain of g o h (skipped)")
    if rep.witness:
        lines.append("  witness sequence (x, A):")
        for x, a in rep.witness[-8:]:
            lines.append(f"    {fmt(x, 12)}  {fmt(a, 8)}")
    rows = [[_num(p.x), p.case, _num(p.A), _num(p.B)] for p in rep.points]

    def plot(path):
        from .plotting import plot_compat

        return plot_compat(rep, path)

    code = 1 if rep.verdict == "refuted" else 0
    return payload, "\n".join(lines), (["x", "case", "A", "B"], rows), code, plot


def cmd_stability(cfg: RunConfig):
    from . import stability as st

    f = ex.parse(cfg.expressions["f"])
    if cfg.domain is None:
        raise UsageError("stability needs --domain")
    kind = cfg.kind or "forward"
    ts = cfg.t_set
    if kind == "forward":
        verdicts = [st.forward_profile(f, cfg.domain, None, ts, cfg.samples, cfg.seed)]
    elif kind == "backward":
        verdicts = [st.backward_check(f, cfg.domain, None, ts, cfg.samples, cfg.seed)]
    elif kind == "mixed":
        verdicts = [st.mixed_check(f, cfg.domain, None, ts, cfg.samples, cfg.seed)]
    else:
        verdicts = list(st.chain_profile(f, cfg.domain, None, ts, cfg.samples, cfg.seed))
    payload = {"expr": ex.to_text(f), "domain": cfg.domain, "verdicts": []}
    lines = [f"f(x) = {ex.to_text(f)} on {cfg.domain}, t in {ts}"]
    rows = []
    for v in verdicts:
        payload["verdicts"].append(
            {
                "kind": v.kind,
                "estimated_C": _num(v.estimated_C),
                "holds": v.holds,
                "per_t": {str(t): _num(c) for t, c in v.per_t().items()},
                "violations": [[_num(s.x), s.t, s.status] for s in v.violations],
                "skipped": len(v.skipped),
            }
        )
        lines.append(f"  {v.kind}: estimated C = {fmt(v.estimated_C, 6)}  ({'holds' if v.holds else 'VIOLATED'})")
        lines.append("    per t: " + ", ".join(f"{t}:{fmt(c, 4)}" for t, c in v.per_t().items()))
        if v.skipped:
            lines.append(f"    {len(v.skipped)} samples skipped (infinite mu or not checkable)")
        rows += [[v.kind, _num(s.x), s.t, s.status, _num(s.ratio)] for s in v.samples]

    def plot(path):
        from .plotting import plot_stability

        return plot_stability(verdicts[-1], path)

    code = 0 if all(v.holds for v in verdicts) else 1
    return payload, "\n".join(lines), (["kind", "x", "t", "status", "ratio"], rows), code, plot


def cmd_tables(cfg: RunConfig):
    from .catalog import list_entries, verify_entry

    entries = list_entries(cfg.expressions.get("only"))
    if not entries:
        raise UsageError(f"no catalog entry {cfg.expressions.get('only')!r}")
    reports = [verify_entry(e, seed=cfg.seed) for e in entries]
    recs = [r.record() for r in reports]
    for rec in recs:
        for k in ("kappa_max_rel_err", "H_sup", "H_bound", "H_reference"):
            if rec[k] is not None and rec[k] != "inf":
                rec[k] = fmt(mpf(rec[k]), 6)
    lines = []
    for r in reports:
        bound = "-" if r.H_bound is None else fmt(r.H_bound, 6)
        status = "match" if r.match else "MISMATCH"
        lines.append(
            f"{r.source:6} {r.id:11} {r.verdict:12} kappa_err={fmt(r.kappa_max_rel_err, 2):9} "
            f"sup|H|={fmt(r.H_sup, 6):10} bound={bound:9} {status}"
        )
        for p in r.problems:
            lines.append(f"       {p}")
    n_ok = sum(r.match for r in reports)
    lines.append(f"{n_ok}/{len(reports)} rows match")
    payload = {"records": recs, "matched": n_ok, "total": len(reports)}
    cols = ["id", "source", "verdict", "kappa_max_rel_err", "H_sup", "H_bound", "status"]
    rows = [[rec[c] for c in cols] for rec in recs]

    def plot(path):
        from .plotting import plot_tables

        return plot_tables(reports, path)

    return payload, "\n".join(lines), (cols, rows), 0 if n_ok == len(reports) else 1, plot


COMMANDS = {
    "analyze": cmd_analyze,
    "amenable": cmd_amenable,
    "compatible": cmd_compatible,
    "stability": cmd_stability,
    "tables": cmd_tables,
}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", help='open intervals, e.g. "(0, inf)" or "(-pi/2, pi/2) U (1, 2)"')
    common.add_argument("--samples", type=int, default=None, help="sample count (per component)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("human", "json", "csv"), default="human")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--plot", help="figure path (default: next to --out, same stem, .png)")
    common.add_argument("--no-plot", action="store_true", help="never write a figure")

    p = argparse.ArgumentParser(prog="amenable-kit", description="Condition numbers, amenability and stability checks.")
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="kappa, mu, H, G at a point or over a sweep")
    a.add_argument("--expr", required=True)
    a.add_argument("--x")
    m = sub.add_parser("amenable", parents=[common], help="amenability evidence per component")
    m.add_argument("--expr", required=True)
    c = sub.add_parser("compatible", parents=[common], help="bounded-ratio compatibility check")
    c.add_argument("--g", required=True)
    c.add_argument("--h", required=True)
    s = sub.add_parser("stability", parents=[common], help="simulated floating-point stability")
    s.add_argument("--expr", required=True)
    s.add_argument("--kind", choices=("forward", "backward", "mixed", "all"), default="forward")
    s.add_argument("--t-set", default="8,12,16,20,24", help='precisions, e.g. "8..24" or "8,16,24"')
    t = sub.add_parser("tables", parents=[common], help="reproduce the built-in catalog")
    t.add_argument("--only", help="a single entry id or source tag")
    return p


DEFAULT_SAMPLES = {"analyze": 256, "amenable": 0, "compatible": 128, "stability": 64, "tables": 0}


def config_from_args(args) -> RunConfig:
    exprs = {}
    for key in ("expr", "g", "h", "only"):
        v = getattr(args, key, None)
        if v is not None:
            exprs["f" if key == "expr" else key] = v
    samples = args.samples if args.samples is not None else DEFAULT_SAMPLES[args.command]
    t_set = _t_set(args.t_set) if getattr(args, "t_set", None) else []
    return RunConfig(
        args.command,
        exprs,
        args.domain,
        getattr(args, "x", None),
        t_set,
        samples,
        args.seed,
        args.format,
        args.out,
        getattr(args, "kind", None),
    )


def render(cfg: RunConfig, payload: dict, human: str, table) -> str:
    if cfg.format == "json":
        doc = {"schema": SCHEMA, "config": asdict(cfg), "result": payload}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols, rows = table
        w.writerow(cols)
        w.writerows(rows)
        return buf.getvalue()
    return human + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        payload, human, table, code, plot = COMMANDS[cfg.command](cfg)
    except (UsageError, ex.ExprSyntaxError, DomainSyntaxError, ex.DomainViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(cfg, payload, human, table)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    fig = args.plot or (str(Path(cfg.out).with_suffix(".png")) if cfg.out else None)
    if fig and not args.no_plot:
        written = plot(fig)
        if cfg.out:
            print(f"figure: {written}", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
