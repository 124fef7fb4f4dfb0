"""Matplotlib figure emission for the report path (PNG alongside CSV/JSON).

These are human-viewing companions to the report files; the SVG renderers
in render.py remain the structural plotting contract. Agg output carries
no timestamps, so repeat runs stay byte-identical.
"""

from __future__ import annotations

from pathlib import Path as FilePath
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .layout import CATEGORIES, BinLayout
from .simulate import SimulationReport, SortEvent


def save_simulation_figure(
    layout: BinLayout,
    events: Sequence[SortEvent],
    report: SimulationReport,
    path: str | FilePath,
) -> None:
    """Cell view: bins labeled by category, home marker, and every distinct
    arm path the run used, annotated with the aggregate energy."""
    fig, ax = plt.subplots(figsize=(8, 6), dpi=100)

    drawn: set[tuple] = set()
    for ev in events:
        key = tuple(p.as_tuple() for p in ev.path.waypoints)
        if key in drawn:
            continue
        drawn.add(key)
        xs = [p.x for p in ev.path.waypoints]
        ys = [p.y for p in ev.path.waypoints]
        ax.plot(xs, ys, "-", color="tab:red", alpha=0.6, linewidth=1.5, zorder=2)

    for category in CATEGORIES:
        p = layout.bins[category]
        ax.scatter([p.x], [p.y], marker="s", s=120, color="tab:green", zorder=3)
        ax.annotate(category.value, (p.x, p.y), textcoords="offset points", xytext=(8, 8), fontsize=9)
    ax.scatter([layout.home.x], [layout.home.y], marker="o", s=90, color="black", zorder=3)
    ax.annotate("home", (layout.home.x, layout.home.y), textcoords="offset points", xytext=(8, -12), fontsize=9)

    ax.set_title(
        f"{report.item_count} items, {report.policy.value} policy: "
        f"{report.total_energy:.2f} units total, "
        f"{100 * report.misplacement_rate:.1f}% misplaced"
    )
    ax.set_xlabel("x (grid units)")
    ax.set_ylabel("y (grid units)")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, linestyle="--", alpha=0.35)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_compare_figure(
    baseline: SimulationReport,
    optimized: SimulationReport,
    savings_fraction: float,
    path: str | FilePath,
) -> None:
    """Grouped bars of per-category energy under both policies."""
    fig, ax = plt.subplots(figsize=(8, 6), dpi=100)
    names = [c.value for c in CATEGORIES]
    base_vals = [baseline.per_category_energy[c] for c in CATEGORIES]
    opt_vals = [optimized.per_category_energy[c] for c in CATEGORIES]
    positions = range(len(names))
    width = 0.38
    ax.bar([p - width / 2 for p in positions], base_vals, width, label=f"baseline ({baseline.policy.value})")
    ax.bar([p + width / 2 for p in positions], opt_vals, width, label=f"optimized ({optimized.policy.value})")
    ax.set_xticks(list(positions))
    ax.set_xticklabels(names, rotation=20)
    ax.set_ylabel("energy (units)")
    ax.set_title(f"energy by destination bin: {100 * savings_fraction:.1f}% saved")
    ax.legend()
    ax.grid(True, axis="y", linestyle="--", alpha=0.35)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
