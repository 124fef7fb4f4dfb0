"""Sorting-cell geometry: waste categories, bin coordinates, layout files."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path as FilePath
from types import MappingProxyType
from typing import Mapping

from .errors import SchemaError

DEFAULT_WEIGHT_FACTOR = 0.8


class WasteCategory(str, enum.Enum):
    """The six sortable waste classes, in fixed canonical (alphabetical) order."""

    CARDBOARD = "cardboard"
    GLASS = "glass"
    METAL = "metal"
    PAPER = "paper"
    PLASTIC = "plastic"
    TRASH = "trash"

    def __str__(self) -> str:  # noqa: D105 - value is the canonical name
        return self.value


# Canonical order: definition order above. Index into probability vectors,
# confusion-matrix rows/columns, and frequency vectors.
CATEGORIES: tuple[WasteCategory, ...] = tuple(WasteCategory)
CATEGORY_INDEX: Mapping[WasteCategory, int] = MappingProxyType(
    {c: i for i, c in enumerate(CATEGORIES)}
)


def parse_category(name: str) -> WasteCategory:
    """Map a lowercase canonical name to its category; ValueError if unknown."""
    try:
        return WasteCategory(name)
    except ValueError:
        raise ValueError(f"unknown waste category {name!r}") from None


@dataclass(frozen=True)
class Point:
    """A position on the 2D cell grid, in abstract grid units."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class BinLayout:
    """Home position of the arm plus one bin coordinate per waste category.

    Immutable after construction; safe to share across concurrent simulations.
    """

    home: Point
    bins: Mapping[WasteCategory, Point] = field(repr=True)

    def __post_init__(self):
        bins = dict(self.bins)
        missing = [c.value for c in CATEGORIES if c not in bins]
        if missing:
            raise ValueError(f"layout is missing bins for: {', '.join(missing)}")
        extra = [k for k in bins if not isinstance(k, WasteCategory)]
        if extra:
            raise ValueError(f"layout has bins for unknown categories: {extra}")
        points = [self.home] + [bins[c] for c in CATEGORIES]
        seen: dict[tuple[float, float], str] = {}
        labels = ["home"] + [c.value for c in CATEGORIES]
        for label, p in zip(labels, points):
            key = p.as_tuple()
            if key in seen:
                raise ValueError(
                    f"{label} and {seen[key]} coincide at ({p.x}, {p.y}); "
                    "bins must be pairwise distinct and distinct from home"
                )
            seen[key] = label
        # Re-key in canonical order and freeze.
        ordered = {c: bins[c] for c in CATEGORIES}
        object.__setattr__(self, "bins", MappingProxyType(ordered))


def default_layout() -> BinLayout:
    """The built-in cell geometry: arm home at the origin, six bins nearby.

    The plastic bin sits at (10, 4); a direct move there from home covers
    sqrt(116) ~ 10.77 grid units.
    """
    return BinLayout(
        home=Point(0.0, 0.0),
        bins={
            WasteCategory.CARDBOARD: Point(8.0, 6.0),
            WasteCategory.GLASS: Point(6.0, 10.0),
            WasteCategory.METAL: Point(10.0, 10.0),
            WasteCategory.PAPER: Point(4.0, 6.0),
            WasteCategory.PLASTIC: Point(10.0, 4.0),
            WasteCategory.TRASH: Point(6.0, 4.0),
        },
    )


def _reject_duplicate_keys(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ValueError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _parse_point(value, what: str) -> Point:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise SchemaError(f"{what} must be a [x, y] pair, got {value!r}")
    x, y = value
    if not isinstance(x, (int, float)) or not isinstance(y, (int, float)) or isinstance(x, bool) or isinstance(y, bool):
        raise SchemaError(f"{what} coordinates must be numbers, got {value!r}")
    try:
        return Point(float(x), float(y))
    except ValueError as exc:
        raise SchemaError(f"{what}: {exc}") from None


def parse_layout_file(path: str | FilePath) -> tuple[BinLayout, float]:
    """Load a layout JSON file; returns the layout and its weight factor.

    Schema: {"home": [x, y], "bins": {"cardboard": [x, y], ...}, "weight_factor": w}
    All six category keys are required (no silent defaults); weight_factor is
    optional and defaults to 0.8.
    """
    path = FilePath(path)
    text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc.msg}", path=str(path), line=exc.lineno) from None
    except ValueError as exc:
        raise SchemaError(f"malformed JSON: {exc}", path=str(path)) from None

    if not isinstance(doc, dict):
        raise SchemaError("layout document must be a JSON object", path=str(path))
    unknown = set(doc) - {"home", "bins", "weight_factor"}
    if unknown:
        raise SchemaError(f"unexpected top-level keys: {sorted(unknown)}", path=str(path))
    if "home" not in doc or "bins" not in doc:
        raise SchemaError('layout document requires "home" and "bins"', path=str(path))

    try:
        home = _parse_point(doc["home"], "home")
        bins_doc = doc["bins"]
        if not isinstance(bins_doc, dict):
            raise SchemaError('"bins" must be an object keyed by category name')
        bins: dict[WasteCategory, Point] = {}
        for name, coords in bins_doc.items():
            try:
                cat = parse_category(name)
            except ValueError as exc:
                raise SchemaError(str(exc)) from None
            bins[cat] = _parse_point(coords, f"bin {name!r}")
        missing = [c.value for c in CATEGORIES if c not in bins]
        if missing:
            raise SchemaError(f"missing bins for: {', '.join(missing)}")

        weight_factor = doc.get("weight_factor", DEFAULT_WEIGHT_FACTOR)
        if isinstance(weight_factor, bool) or not isinstance(weight_factor, (int, float)):
            raise SchemaError(f"weight_factor must be a number, got {weight_factor!r}")
        weight_factor = float(weight_factor)
    except SchemaError as exc:
        if exc.path is None:
            raise SchemaError(str(exc), path=str(path)) from None
        raise

    layout = BinLayout(home=home, bins=bins)  # coincidence checks -> ValueError
    if not (weight_factor > 0 and math.isfinite(weight_factor)):
        raise ValueError(f"weight_factor must be > 0 and finite, got {weight_factor}")
    return layout, weight_factor


def load_layout(path: str | FilePath) -> BinLayout:
    """Load and validate a layout file, ignoring its weight factor."""
    layout, _ = parse_layout_file(path)
    return layout


def save_layout(layout: BinLayout, path: str | FilePath, weight_factor: float = DEFAULT_WEIGHT_FACTOR) -> None:
    """Write a layout (plus weight factor) as canonical, re-loadable JSON."""
    doc = {
        "home": [layout.home.x, layout.home.y],
        "bins": {c.value: [p.x, p.y] for c, p in layout.bins.items()},
        "weight_factor": weight_factor,
    }
    FilePath(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
