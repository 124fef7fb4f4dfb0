"""Batch sorting simulation: per-item arm moves, energy accounting, savings.

Every item triggers one outbound move from home to the bin of its
*predicted* category; misclassified items land in the wrong bin (there is
no rejection stage), so their energy is charged to the bin actually
visited. An optional count-return mode extends each move into a round
trip, doubling distance and energy.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path as FilePath
from typing import Iterable, Sequence

from .classify import PredictionRecord
from .layout import CATEGORIES, BinLayout, WasteCategory
from .motion import EnergyModel, MovementPolicy, Path, energy_cost, path_length, plan_path, savings_ratio

EVENTS_HEADER = ("item_id", "true_label", "pred_label", "distance", "energy", "misplaced")


@dataclass(frozen=True)
class SortEvent:
    """One simulated pick-and-place: the path taken and what it cost."""

    item_id: str
    true_label: WasteCategory
    predicted_label: WasteCategory
    path: Path
    distance: float
    energy: float
    misplaced: bool


@dataclass(frozen=True)
class BaselineComparison:
    baseline_total: float
    savings_fraction: float
    anomalous: bool  # True when the optimized run cost more than the baseline


@dataclass(frozen=True)
class SimulationReport:
    item_count: int
    total_energy: float
    per_category_energy: dict[WasteCategory, float]  # keyed by predicted (visited) bin
    misplacement_rate: float
    mean_energy_per_item: float
    policy: MovementPolicy
    count_return: bool
    baseline_comparison: BaselineComparison | None = None


def _plan_move(policy: MovementPolicy, layout: BinLayout, destination: WasteCategory, count_return: bool) -> Path:
    outbound = plan_path(policy, layout.home, layout.bins[destination])
    assert outbound is not None  # bins are distinct from home by layout invariant
    if not count_return:
        return outbound
    # Round trip: retrace the outbound waypoints back to home.
    waypoints = outbound.waypoints + tuple(reversed(outbound.waypoints[:-1]))
    return Path(waypoints, policy)


def run_simulation(
    layout: BinLayout,
    model: EnergyModel,
    policy: MovementPolicy,
    predictions: Sequence[PredictionRecord],
    count_return: bool = False,
) -> tuple[list[SortEvent], SimulationReport]:
    """Simulate sorting every record in order; returns the events and aggregates."""
    if not predictions:
        raise ValueError("cannot simulate an empty prediction stream")
    events: list[SortEvent] = []
    per_category = {c: 0.0 for c in CATEGORIES}
    total = 0.0
    misplaced_count = 0
    for rec in predictions:
        path = _plan_move(policy, layout, rec.predicted_label, count_return)
        distance = path_length(path)
        energy = energy_cost(distance, model)
        misplaced = rec.true_label is not rec.predicted_label
        events.append(
            SortEvent(
                item_id=rec.item_id,
                true_label=rec.true_label,
                predicted_label=rec.predicted_label,
                path=path,
                distance=distance,
                energy=energy,
                misplaced=misplaced,
            )
        )
        per_category[rec.predicted_label] += energy
        total += energy
        misplaced_count += misplaced
    count = len(events)
    report = SimulationReport(
        item_count=count,
        total_energy=total,
        per_category_energy=per_category,
        misplacement_rate=misplaced_count / count,
        mean_energy_per_item=total / count,
        policy=policy,
        count_return=count_return,
    )
    return events, report


def compare_policies(
    layout: BinLayout,
    model: EnergyModel,
    predictions: Sequence[PredictionRecord],
    baseline: MovementPolicy,
    optimized: MovementPolicy,
    count_return: bool = False,
) -> SimulationReport:
    """Run both policies over the same stream; report the optimized run with
    the baseline total and the fraction of energy saved."""
    _, baseline_report = run_simulation(layout, model, baseline, predictions, count_return)
    _, optimized_report = run_simulation(layout, model, optimized, predictions, count_return)
    savings = savings_ratio(baseline_report.total_energy, optimized_report.total_energy)
    comparison = BaselineComparison(
        baseline_total=baseline_report.total_energy,
        savings_fraction=savings,
        anomalous=savings < 0,
    )
    return SimulationReport(
        item_count=optimized_report.item_count,
        total_energy=optimized_report.total_energy,
        per_category_energy=optimized_report.per_category_energy,
        misplacement_rate=optimized_report.misplacement_rate,
        mean_energy_per_item=optimized_report.mean_energy_per_item,
        policy=optimized,
        count_return=count_return,
        baseline_comparison=comparison,
    )


def report_to_dict(report: SimulationReport, version: str) -> dict:
    """Report JSON document: the report fields plus the tool version."""
    doc = {
        "item_count": report.item_count,
        "total_energy": report.total_energy,
        "per_category_energy": {c.value: report.per_category_energy[c] for c in CATEGORIES},
        "misplacement_rate": report.misplacement_rate,
        "mean_energy_per_item": report.mean_energy_per_item,
        "policy": report.policy.value,
        "count_return": report.count_return,
        "baseline_comparison": None,
        "version": version,
    }
    if report.baseline_comparison is not None:
        doc["baseline_comparison"] = {
            "baseline_total": report.baseline_comparison.baseline_total,
            "savings_fraction": report.baseline_comparison.savings_fraction,
            "anomalous": report.baseline_comparison.anomalous,
        }
    return doc


def write_events_csv(events: Iterable[SortEvent], path: str | FilePath) -> None:
    """Write per-item events as CSV (UTF-8, LF)."""
    with FilePath(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(EVENTS_HEADER)
        for ev in events:
            writer.writerow(
                [
                    ev.item_id,
                    ev.true_label.value,
                    ev.predicted_label.value,
                    repr(ev.distance),
                    repr(ev.energy),
                    "true" if ev.misplaced else "false",
                ]
            )
