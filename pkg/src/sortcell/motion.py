"""Arm motion: path planning, distances, and the energy-cost model.

Energy for a move is path length multiplied by a weight factor
(default 0.8 energy units per grid unit). The direct policy moves in a
single straight segment; the rectilinear policy is the naive baseline
that covers the full x-displacement, then the full y-displacement.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .layout import Point


class MovementPolicy(str, enum.Enum):
    DIRECT = "direct"
    RECTILINEAR = "rectilinear"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Path:
    """An ordered waypoint sequence for one arm move."""

    waypoints: tuple[Point, ...]
    policy: MovementPolicy

    def __post_init__(self):
        object.__setattr__(self, "waypoints", tuple(self.waypoints))
        if len(self.waypoints) < 2:
            raise ValueError("a path needs at least 2 waypoints")
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            if a == b:
                raise ValueError(f"consecutive waypoints coincide at ({a.x}, {a.y})")

    @property
    def start(self) -> Point:
        return self.waypoints[0]

    @property
    def end(self) -> Point:
        return self.waypoints[-1]


@dataclass(frozen=True)
class EnergyModel:
    """Converts grid distance into energy units: energy = distance * weight_factor."""

    weight_factor: float = 0.8

    def __post_init__(self):
        w = float(self.weight_factor)
        object.__setattr__(self, "weight_factor", w)
        if not (math.isfinite(w) and w > 0):
            raise ValueError(f"weight_factor must be finite and > 0, got {w}")


def euclidean_distance(a: Point, b: Point) -> float:
    """Straight-line distance between two grid points."""
    return math.hypot(b.x - a.x, b.y - a.y)


def path_length(path: Path) -> float:
    """Total length of a path: sum of Euclidean segment lengths."""
    return sum(euclidean_distance(a, b) for a, b in zip(path.waypoints, path.waypoints[1:]))


def plan_path(policy: MovementPolicy, start: Point, destination: Point) -> Path | None:
    """Plan the waypoint path for one move under the given policy.

    Returns None for a zero-displacement move (the empty-move marker:
    distance 0, energy 0); a Path with two equal waypoints would be invalid.
    Rectilinear paths run x-first through (destination.x, start.y); the
    intermediate waypoint is dropped when the displacement is axis-aligned.
    """
    if start == destination:
        return None
    if policy is MovementPolicy.DIRECT:
        return Path((start, destination), policy)
    corner = Point(destination.x, start.y)
    if corner == start or corner == destination:
        return Path((start, destination), policy)
    return Path((start, corner, destination), policy)


def move_distance(policy: MovementPolicy, start: Point, destination: Point) -> float:
    """Distance the arm covers for one move, without building the Path."""
    dx = destination.x - start.x
    dy = destination.y - start.y
    if policy is MovementPolicy.DIRECT:
        return math.hypot(dx, dy)
    return abs(dx) + abs(dy)


def energy_cost(distance: float, model: EnergyModel) -> float:
    """Energy drawn by a move of the given length."""
    if not (math.isfinite(distance) and distance >= 0):
        raise ValueError(f"distance must be finite and >= 0, got {distance}")
    return distance * model.weight_factor


def savings_ratio(baseline_energy: float, optimized_energy: float) -> float:
    """Fractional energy saved: 1 - optimized/baseline.

    Negative when the "optimized" run costs more than the baseline; callers
    flag that in reports rather than erroring.
    """
    if not (math.isfinite(baseline_energy) and baseline_energy > 0):
        raise ValueError(f"baseline_energy must be > 0, got {baseline_energy}")
    if not (math.isfinite(optimized_energy) and optimized_energy >= 0):
        raise ValueError(f"optimized_energy must be >= 0, got {optimized_energy}")
    return 1.0 - optimized_energy / baseline_energy
