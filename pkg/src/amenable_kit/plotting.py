"""Figures written next to CLI reports.  Always renders off-screen."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .refnum import INF  # noqa: E402

rc_params = {
    "figure.figsize": [8, 5],
    "axes.grid": True,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.labelsize": 12,
    "legend.frameon": False,
    "legend.fontsize": 9,
    "savefig.dpi": 120,
    "svg.hashsalt": "amenable-kit",
}


def _num(v) -> float:
    if v is None:
        return np.nan
    if v == INF:
        return np.inf
    return float(v)


def _save(fig, path) -> str:
    # no timestamps in the file, so identical runs give identical bytes
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return str(path)


def plot_sweep(rows, path, title: str = "") -> str:
    """kappa and |H| against x for an analyze sweep."""
    with plt.rc_context(rc_params):
        fig, ax = plt.subplots()
        xs = np.array([_num(r.x) for r in rows])
        k = np.array([_num(r.kappa) for r in rows])
        h = np.array([abs(_num(r.H)) for r in rows])
        ax.plot(xs, k, ".", ms=3, label="kappa")
        ax.plot(xs, h, ".", ms=3, label="|H|")
        ax.set_yscale("symlog", linthresh=1e-3)
        if np.all(xs > 0):
            ax.set_xscale("log")
        ax.set_xlabel("x")
        ax.set_title(title)
        ax.legend()
        return _save(fig, path)


def plot_evidence(report, path) -> str:
    """kappa and |H| along every endpoint approach of an amenability report."""
    with plt.rc_context(rc_params):
        fig, (a1, a2) = plt.subplots(1, 2, figsize=(11, 4.5))
        for comp in report.components:
            for r in comp.items:
                ev = r.evidence
                if ev is None:
                    continue
                if ev.distances[0] is not None:
                    t = [_num(d) for d in ev.distances]
                else:
                    t = [abs(_num(x)) for x in ev.xs]
                lab = f"{comp.interval} @ {r.end}"
                if r.item == 1:
                    a1.loglog(t, [_num(k) for k in ev.kappas], ".-", ms=3, label=lab)
                else:
                    a2.loglog(t, [abs(_num(h)) for h in ev.Hs], ".-", ms=3, label=lab)
        a1.set_xlabel("distance to the end (or |x|)")
        a1.set_ylabel("kappa")
        a2.set_xlabel("distance to the end (or |x|)")
        a2.set_ylabel("|H|")
        for a in (a1, a2):
            if a.get_legend_handles_labels()[0]:
                a.legend()
        fig.suptitle(f"{report.expr}: {report.overall}")
        fig.tight_layout()
        return _save(fig, path)


def plot_stability(verdict, path) -> str:
    """Per-sample constant needed, coloured by precision."""
    with plt.rc_context(rc_params):
        fig, ax = plt.subplots()
        ts = sorted({s.t for s in verdict.samples})
        for t in ts:
            sub = [s for s in verdict.samples if s.t == t and s.status == "ok"]
            ax.plot([_num(s.x) for s in sub], [_num(s.ratio) for s in sub], ".", ms=3, label=f"t={t}")
        ax.axhline(_num(verdict.estimated_C), color="k", lw=0.8, ls="--", label="estimated C")
        ax.set_xscale("symlog", linthresh=1e-6)
        ax.set_yscale("symlog", linthresh=1e-3)
        ax.set_xlabel("x")
        ax.set_ylabel("constant needed")
        ax.set_title(verdict.kind)
        ax.legend(ncol=2)
        return _save(fig, path)


def plot_compat(report, path) -> str:
    """A against |x| over every evaluated point."""
    with plt.rc_context(rc_params):
        fig, ax = plt.subplots()
        pts = [p for p in report.points if p.A != INF and p.x != 0]
        ax.loglog([abs(_num(p.x)) for p in pts], [max(_num(p.A), 1e-300) for p in pts], ".", ms=3, label="A")
        if report.witness:
            ax.loglog([abs(_num(x)) for x, _ in report.witness], [_num(a) for _, a in report.witness], "r-", label="witness")
        ax.set_xlabel("|x|")
        ax.set_ylabel("A")
        ax.set_title(f"g={report.g}, h={report.h}: {report.verdict}")
        ax.legend()
        return _save(fig, path)


def plot_tables(reports, path) -> str:
    """Sampled sup |H| against the stated bound per catalog row."""
    with plt.rc_context(rc_params):
        fig, ax = plt.subplots(figsize=(11, 4.5))
        names = [r.source for r in reports]
        sup = [_num(r.H_sup) for r in reports]
        bound = [_num(r.H_bound) for r in reports]
        idx = np.arange(len(reports))
        ax.bar(idx, sup, color=["tab:blue" if r.match else "tab:red" for r in reports], label="sampled sup |H|")
        ax.plot(idx, bound, "k_", ms=14, label="stated bound")
        ax.set_yscale("log")
        ax.set_xticks(idx)
        ax.set_xticklabels(names, rotation=60, fontsize=8)
        ax.legend()
        fig.tight_layout()
        return _save(fig, path)
