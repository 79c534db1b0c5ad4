"""Figure rendering for the CLI report paths. Uses the Agg backend so PNGs
are written next to the delimited output without needing a display."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from persbounds.persistence import PersistenceDiagram  # noqa: E402

_COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red", "tab:purple")


def plot_diagram(pd: PersistenceDiagram, path, title: str = "persistence diagram") -> Path:
    """Birth/death scatter with the diagonal; essentials drawn at the top."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5, 5))
    finite = [(deg, b, d) for deg, b, d in pd.intervals if math.isfinite(d)]
    top = max([d for _, _, d in finite] + [b for _, b, _ in pd.intervals] + [1.0]) * 1.1
    degrees = sorted({deg for deg, _, _ in pd.intervals})
    for deg in degrees:
        color = _COLORS[deg % len(_COLORS)]
        pts = [(b, d) for dg, b, d in finite if dg == deg]
        if pts:
            ax.scatter(*zip(*pts), s=14, color=color, label=f"degree {deg}")
        ess = [b for dg, b, d in pd.intervals if dg == deg and math.isinf(d)]
        if ess:
            ax.scatter(ess, [top] * len(ess), s=30, marker="^", color=color,
                       label=f"degree {deg} (essential)")
    ax.plot([0, top], [0, top], "k--", lw=0.8)
    ax.set_xlim(-0.02 * top, top)
    ax.set_ylim(-0.02 * top, top)
    ax.set_xlabel("birth")
    ax.set_ylabel("death")
    ax.set_title(title)
    if degrees:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def plot_report(report, path) -> Path:
    """Per-theorem worst-slack bar chart for a verification report."""
    path = Path(path)
    summary = report.summary()
    ids = sorted(summary)
    slacks = [summary[t]["worst_slack"] for t in ids]
    colors = [
        "tab:red" if summary[t]["violated"] else
        "tab:orange" if summary[t]["inconclusive"] else "tab:green"
        for t in ids
    ]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(ids, slacks, color=colors)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_ylabel("worst slack (bound - measured)")
    ax.set_title(f"bound checks: {report.dataset.get('name', 'input')}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def plot_pca_compare(rows, path) -> Path:
    """Grouped bars: PCA sup-residual vs width vs max lifespan per (cloud, k)."""
    path = Path(path)
    labels = [f"{r.dataset}\nk={r.k}" for r in rows]
    x = range(len(rows))
    w = 0.27
    fig, ax = plt.subplots(figsize=(max(6, 1.1 * len(rows)), 4))
    ax.bar([i - w for i in x], [r.pca_residual for r in rows], w, label="PCA sup-residual")
    ax.bar(list(x), [r.kw_value for r in rows], w, label="Kolmogorov width")
    ax.bar([i + w for i in x], [r.max_lifespan for r in rows], w, label="max Cech lifespan")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, fontsize=8)
    ax.legend(fontsize=8)
    ax.set_title("linear vs topological summaries")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
