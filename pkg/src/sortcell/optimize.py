"""Category-to-bin-slot assignment minimizing expected per-item energy.

The objective for an assignment a is sum_c freq[c] * w * dist(policy, home,
slot[a(c)]): the energy an average item costs when categories arrive with
the given frequencies and every item triggers one outbound move. Two
solvers cover the same objective: exhaustive permutation search (exact,
lexicographic tie-break) and the rectangular Hungarian method.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path as FilePath
from typing import Mapping

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import SchemaError
from .layout import CATEGORIES, BinLayout, Point, WasteCategory, parse_category
from .motion import EnergyModel, MovementPolicy, move_distance

_FREQ_SUM_TOL = 1e-9


@dataclass(frozen=True)
class FrequencyDistribution:
    """Arrival frequency of each category, canonical order, summing to 1."""

    freq: tuple[float, ...]

    def __post_init__(self):
        freq = tuple(float(f) for f in self.freq)
        object.__setattr__(self, "freq", freq)
        if len(freq) != len(CATEGORIES):
            raise ValueError(f"expected {len(CATEGORIES)} frequencies, got {len(freq)}")
        if any(f < 0 or not math.isfinite(f) for f in freq):
            raise ValueError(f"frequencies must be nonnegative and finite, got {freq}")
        total = sum(freq)
        if abs(total - 1.0) > _FREQ_SUM_TOL:
            raise ValueError(f"frequencies sum to {total}, expected 1 within {_FREQ_SUM_TOL}")

    @classmethod
    def uniform(cls) -> "FrequencyDistribution":
        n = len(CATEGORIES)
        return cls(tuple(1.0 / n for _ in range(n)))

    @classmethod
    def point_mass(cls, category: WasteCategory) -> "FrequencyDistribution":
        return cls(tuple(1.0 if c is category else 0.0 for c in CATEGORIES))

    def of(self, category: WasteCategory) -> float:
        return self.freq[CATEGORIES.index(category)]


@dataclass(frozen=True)
class SlotSet:
    """Candidate bin positions; at least six pairwise-distinct points."""

    slots: tuple[Point, ...]

    def __post_init__(self):
        slots = tuple(self.slots)
        object.__setattr__(self, "slots", slots)
        if len(slots) < len(CATEGORIES):
            raise ValueError(f"need at least {len(CATEGORIES)} slots, got {len(slots)}")
        seen: set[tuple[float, float]] = set()
        for p in slots:
            key = p.as_tuple()
            if key in seen:
                raise ValueError(f"duplicate slot at ({p.x}, {p.y})")
            seen.add(key)


@dataclass(frozen=True)
class AssignmentSolution:
    """An injective category -> slot-index mapping and its objective value."""

    assignment: Mapping[WasteCategory, int]
    expected_energy: float
    unused_slots: tuple[int, ...]

    def __post_init__(self):
        assignment = dict(self.assignment)
        object.__setattr__(self, "assignment", assignment)
        if set(assignment) != set(CATEGORIES):
            raise ValueError("assignment must cover all six categories")
        indices = list(assignment.values())
        if len(set(indices)) != len(indices):
            raise ValueError("assignment must be injective (no shared slots)")

    def as_vector(self) -> tuple[int, ...]:
        """Slot indices in canonical category order."""
        return tuple(self.assignment[c] for c in CATEGORIES)


def expected_energy(
    layout: BinLayout,
    freq: FrequencyDistribution,
    model: EnergyModel,
    policy: MovementPolicy,
) -> float:
    """Mean outbound energy per item for a fixed layout under a category mix."""
    return sum(
        freq.of(c) * model.weight_factor * move_distance(policy, layout.home, layout.bins[c])
        for c in CATEGORIES
    )


def _cost_terms(
    slots: SlotSet,
    freq: FrequencyDistribution,
    model: EnergyModel,
    policy: MovementPolicy,
    home: Point,
) -> list[list[float]]:
    """cost[c][s]: energy contribution of category c served from slot s."""
    dist = [move_distance(policy, home, p) for p in slots.slots]
    return [
        [freq.freq[ci] * model.weight_factor * d for d in dist]
        for ci in range(len(CATEGORIES))
    ]


def _solution(slots: SlotSet, vector: tuple[int, ...], cost: float) -> AssignmentSolution:
    used = set(vector)
    unused = tuple(i for i in range(len(slots.slots)) if i not in used)
    return AssignmentSolution(
        assignment={c: vector[i] for i, c in enumerate(CATEGORIES)},
        expected_energy=cost,
        unused_slots=unused,
    )


def optimize_assignment_exact(
    slots: SlotSet,
    freq: FrequencyDistribution,
    model: EnergyModel,
    policy: MovementPolicy,
    home: Point,
) -> AssignmentSolution:
    """Enumerate every injective assignment and keep the cheapest.

    Permutations are visited in lexicographic order and only strict
    improvements replace the incumbent, so exact-cost ties resolve to the
    lexicographically smallest assignment vector.
    """
    terms = _cost_terms(slots, freq, model, policy, home)
    n = len(slots.slots)
    best_vec: tuple[int, ...] | None = None
    best_cost = math.inf
    t0, t1, t2, t3, t4, t5 = terms
    for perm in itertools.permutations(range(n), len(CATEGORIES)):
        cost = t0[perm[0]] + t1[perm[1]] + t2[perm[2]] + t3[perm[3]] + t4[perm[4]] + t5[perm[5]]
        if cost < best_cost:
            best_cost = cost
            best_vec = perm
    assert best_vec is not None
    return _solution(slots, best_vec, best_cost)


def optimize_assignment_hungarian(
    slots: SlotSet,
    freq: FrequencyDistribution,
    model: EnergyModel,
    policy: MovementPolicy,
    home: Point,
) -> AssignmentSolution:
    """Solve the same objective as a 6 x n rectangular assignment problem."""
    terms = _cost_terms(slots, freq, model, policy, home)
    matrix = np.asarray(terms, dtype=float)
    row_ind, col_ind = linear_sum_assignment(matrix)
    vector = [0] * len(CATEGORIES)
    for r, c in zip(row_ind, col_ind):
        vector[int(r)] = int(c)
    vec = tuple(vector)
    # Re-sum in canonical category order so equal assignments cost exactly
    # what the exact solver reports.
    cost = sum(terms[ci][vec[ci]] for ci in range(len(CATEGORIES)))
    return _solution(slots, vec, cost)


def load_slots(path: str | FilePath) -> SlotSet:
    """Read a slots JSON file: {"slots": [[x, y], ...]}, at least six points."""
    path = FilePath(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc.msg}", path=str(path), line=exc.lineno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("slots"), list):
        raise SchemaError('expected {"slots": [[x, y], ...]}', path=str(path))
    points = []
    for i, pair in enumerate(doc["slots"]):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in pair)
        ):
            raise SchemaError(f"slot {i} must be a [x, y] number pair, got {pair!r}", path=str(path))
        points.append(Point(float(pair[0]), float(pair[1])))
    return SlotSet(tuple(points))


def load_frequencies(path: str | FilePath) -> FrequencyDistribution:
    """Read a frequency JSON file: {"freq": {"cardboard": f, ...}}, all six keys."""
    path = FilePath(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc.msg}", path=str(path), line=exc.lineno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("freq"), dict):
        raise SchemaError('expected {"freq": {category: frequency, ...}}', path=str(path))
    table = doc["freq"]
    unknown = set(table) - {c.value for c in CATEGORIES}
    if unknown:
        raise SchemaError(f"unknown categories in freq table: {sorted(unknown)}", path=str(path))
    values = []
    for c in CATEGORIES:
        if c.value not in table:
            raise SchemaError(f"missing frequency for {c.value!r}", path=str(path))
        v = table[c.value]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SchemaError(f"frequency for {c.value!r} must be a number, got {v!r}", path=str(path))
        values.append(float(v))
    return FrequencyDistribution(tuple(values))


def parse_home(text: str) -> Point:
    """Parse an "x,y" pair (CLI flag format) into a Point."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"home must be 'x,y', got {text!r}")
    try:
        return Point(float(parts[0]), float(parts[1]))
    except ValueError:
        raise ValueError(f"home must be 'x,y' with numeric coordinates, got {text!r}") from None


__all__ = [
    "FrequencyDistribution",
    "SlotSet",
    "AssignmentSolution",
    "expected_energy",
    "optimize_assignment_exact",
    "optimize_assignment_hungarian",
    "load_slots",
    "load_frequencies",
    "parse_home",
]
