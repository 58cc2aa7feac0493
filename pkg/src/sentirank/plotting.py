"""Figure styling and helpers for report figures.

Figures are drawn on the Agg canvas directly, so nothing here touches the
global pyplot state or needs a display.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
from matplotlib.ticker import NullLocator

STYLE = {
    "font.family": "sans-serif",
    "font.size": 9,
    "axes.linewidth": 0.6,
    "axes.labelsize": 9,
    "axes.titlesize": 9,
    "xtick.labelsize": 7,
    "ytick.labelsize": 7,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "legend.frameon": False,
    "legend.fontsize": 7,
    "grid.alpha": 0.15,
    "grid.linestyle": "-",
    "savefig.dpi": 150,
    "path.simplify": True,
    "svg.hashsalt": "sentirank",
}

GOLDEN = (math.sqrt(5) - 1.0) / 2.0


def new_figure(width: float = 4.0, height: float | None = None, ncols: int = 1):
    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=(width, height or width * GOLDEN))
        FigureCanvasAgg(fig)
        axes = fig.subplots(1, ncols)
    return fig, axes


def save(fig: Figure, path: str | Path) -> Path:
    """Write a PNG without volatile metadata, so reruns are byte-identical."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context(STYLE):
        fig.savefig(path, format="png", metadata={"Software": None})
    return path


def rank_scatter(
    ranks_a: Sequence[float],
    ranks_b: Sequence[float],
    label_a: str,
    label_b: str,
    path: str | Path,
) -> Path:
    """Rank under one metric against rank under its counterpart (log axes)."""
    fig, ax = new_figure(3.6, 3.6)
    with matplotlib.rc_context(STYLE):
        ax.scatter(ranks_a, ranks_b, s=6, alpha=0.5, color="#1f4e79", linewidths=0)
        top = max([1.0, *ranks_a, *ranks_b])
        ax.plot([1, top], [1, top], color="0.5", lw=0.6, ls="--")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel(f"Rank by {label_a}")
        ax.set_ylabel(f"Rank by {label_b}")
        # minor log ticks dominate layout time on large author sets
        ax.xaxis.set_minor_locator(NullLocator())
        ax.yaxis.set_minor_locator(NullLocator())
        ax.grid(True)
        fig.subplots_adjust(left=0.17, right=0.96, bottom=0.14, top=0.96)
    return save(fig, path)


def comparison_bars(
    labels: Sequence[str], taus: Sequence[float], rbds: Sequence[float], path: str | Path
) -> Path:
    fig, (ax_tau, ax_rbd) = new_figure(6.4, 2.6, ncols=2)
    y = list(range(len(labels)))
    with matplotlib.rc_context(STYLE):
        ax_tau.barh(y, taus, color="#1f4e79")
        ax_tau.set_yticks(y)
        ax_tau.set_yticklabels(labels)
        ax_tau.set_xlim(-1, 1)
        ax_tau.axvline(0, color="0.3", lw=0.5)
        ax_tau.set_xlabel("Kendall tau-b")
        ax_tau.invert_yaxis()
        ax_rbd.barh(y, rbds, color="#a23b2a")
        ax_rbd.set_yticks(y)
        ax_rbd.set_yticklabels([])
        ax_rbd.set_xlim(0, 1)
        ax_rbd.set_xlabel("RBD")
        ax_rbd.invert_yaxis()
        fig.tight_layout()
    return save(fig, path)
