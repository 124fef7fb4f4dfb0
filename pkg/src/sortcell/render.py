"""Deterministic SVG renderings of sort trajectories and training history.

Output is plain SVG text built without plotting libraries: byte-identical
for identical inputs (no timestamps, fixed 4-decimal coordinate
formatting), well-formed XML, and diffable in review.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .layout import CATEGORIES, BinLayout
from .metrics import TrainingHistory
from .simulate import SortEvent

CANVAS_W = 800.0
CANVAS_H = 600.0
MARGIN_FRACTION = 0.05  # of each canvas dimension, per side

_TRAIN_COLOR = "#1f77b4"
_VAL_COLOR = "#ff7f0e"
_PATH_COLOR = "#d62728"
_BIN_COLOR = "#2ca02c"
_HOME_COLOR = "#333333"


def _fmt(v: float) -> str:
    """Fixed 4-decimal coordinate formatting (avoids repr drift across values)."""
    return f"{v:.4f}"


class _Svg:
    def __init__(self, width: float, height: float):
        self.parts: list[str] = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
            f'viewBox="0 0 {width:.0f} {height:.0f}">',
            f'<rect x="0" y="0" width="{width:.0f}" height="{height:.0f}" fill="white"/>',
        ]

    def line(self, x1, y1, x2, y2, stroke, width=1.0, dash=None):
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{width:g}"{dash_attr}/>'
        )

    def polyline(self, points, stroke, width=2.0):
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        self.parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{stroke}" stroke-width="{width:g}"/>'
        )

    def circle(self, cx, cy, r, fill, stroke="none"):
        self.parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{r:g}" fill="{fill}" stroke="{stroke}"/>'
        )

    def rect(self, x, y, w, h, fill, stroke="none"):
        self.parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" height="{_fmt(h)}" '
            f'fill="{fill}" stroke="{stroke}"/>'
        )

    def text(self, x, y, content, size=13, fill="#000000", anchor="start"):
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-family="sans-serif" font-size="{size:g}" '
            f'fill="{fill}" text-anchor="{anchor}">{escape(content)}</text>'
        )

    def document(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _world_transform(xs: list[float], ys: list[float]):
    """Aspect-preserving map from world bounds into the margined canvas,
    y-axis flipped (world y up, SVG y down), drawing centered."""
    margin_x = CANVAS_W * MARGIN_FRACTION
    margin_y = CANVAS_H * MARGIN_FRACTION
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    extent_x = max_x - min_x or 1.0
    extent_y = max_y - min_y or 1.0
    scale = min((CANVAS_W - 2 * margin_x) / extent_x, (CANVAS_H - 2 * margin_y) / extent_y)
    offset_x = (CANVAS_W - scale * extent_x) / 2
    offset_y = (CANVAS_H - scale * extent_y) / 2

    def to_canvas(x: float, y: float) -> tuple[float, float]:
        return (offset_x + (x - min_x) * scale, CANVAS_H - (offset_y + (y - min_y) * scale))

    return to_canvas


def render_trajectory(layout: BinLayout, event: SortEvent) -> str:
    """SVG of the sorting cell with the event's arm path and energy annotation.

    All six bins are drawn and labeled, home is marked, and the path appears
    as a polyline with its energy printed to two decimals.
    """
    destination = layout.bins.get(event.predicted_label)
    if destination is None or destination not in event.path.waypoints:
        raise ValueError(
            f"event destination {event.predicted_label.value!r} does not match a bin "
            "of this layout"
        )

    xs = [layout.home.x] + [p.x for p in layout.bins.values()] + [p.x for p in event.path.waypoints]
    ys = [layout.home.y] + [p.y for p in layout.bins.values()] + [p.y for p in event.path.waypoints]
    to_canvas = _world_transform(xs, ys)

    svg = _Svg(CANVAS_W, CANVAS_H)

    # Arm path with waypoint dots.
    canvas_path = [to_canvas(p.x, p.y) for p in event.path.waypoints]
    svg.polyline(canvas_path, stroke=_PATH_COLOR, width=2.5)
    for cx, cy in canvas_path:
        svg.circle(cx, cy, 3, fill=_PATH_COLOR)

    # Bins, labeled by category.
    for category in CATEGORIES:
        p = layout.bins[category]
        cx, cy = to_canvas(p.x, p.y)
        svg.rect(cx - 6, cy - 6, 12, 12, fill=_BIN_COLOR, stroke="#145214")
        svg.text(cx + 9, cy - 9, category.value, size=12)

    # Home marker.
    hx, hy = to_canvas(layout.home.x, layout.home.y)
    svg.circle(hx, hy, 7, fill="white", stroke=_HOME_COLOR)
    svg.circle(hx, hy, 2.5, fill=_HOME_COLOR)
    svg.text(hx + 10, hy + 14, "home", size=12, fill=_HOME_COLOR)

    svg.text(10, 22, f"item {event.item_id}: {event.true_label.value} sorted to {event.predicted_label.value}", size=14)
    svg.text(10, 42, f"energy: {event.energy:.2f} units", size=14)
    svg.text(10, 62, f"distance: {event.distance:.4f} grid units ({event.path.policy.value})", size=13)
    return svg.document()


def render_history_plot(history: TrainingHistory) -> str:
    """SVG line chart of train vs validation accuracy per epoch.

    Y axis is fixed to 0-100 percent; the final train-validation gap is
    annotated in the corner.
    """
    if len(history.epochs) < 2:
        raise ValueError("history plot needs at least 2 epochs")

    left, right, top, bottom = 70.0, 30.0, 50.0, 60.0
    plot_w = CANVAS_W - left - right
    plot_h = CANVAS_H - top - bottom
    epochs = [e.epoch for e in history.epochs]
    first, last = epochs[0], epochs[-1]
    span = (last - first) or 1

    def x_of(epoch: int) -> float:
        return left + (epoch - first) / span * plot_w

    def y_of(acc: float) -> float:
        return top + (100.0 - acc) / 100.0 * plot_h

    svg = _Svg(CANVAS_W, CANVAS_H)

    # Gridlines and y ticks every 20 percent.
    for tick in range(0, 101, 20):
        y = y_of(tick)
        svg.line(left, y, left + plot_w, y, stroke="#dddddd")
        svg.text(left - 8, y + 4, str(tick), size=11, anchor="end")

    # X ticks: at most ~7, always including first and last epochs.
    stride = max(1, (len(epochs) - 1) // 6 or 1)
    tick_epochs = sorted({epochs[i] for i in range(0, len(epochs), stride)} | {last})
    for e in tick_epochs:
        x = x_of(e)
        svg.line(x, top + plot_h, x, top + plot_h + 5, stroke="#000000")
        svg.text(x, top + plot_h + 20, str(e), size=11, anchor="middle")

    # Axes.
    svg.line(left, top, left, top + plot_h, stroke="#000000")
    svg.line(left, top + plot_h, left + plot_w, top + plot_h, stroke="#000000")
    svg.text(left + plot_w / 2, CANVAS_H - 15, "epoch", size=12, anchor="middle")
    svg.text(18, top + plot_h / 2, "accuracy (%)", size=12, anchor="middle")

    svg.polyline([(x_of(e.epoch), y_of(e.train_accuracy)) for e in history.epochs], stroke=_TRAIN_COLOR)
    svg.polyline([(x_of(e.epoch), y_of(e.val_accuracy)) for e in history.epochs], stroke=_VAL_COLOR)

    # Legend.
    lx, ly = left + plot_w - 150, top + 12
    svg.line(lx, ly, lx + 24, ly, stroke=_TRAIN_COLOR, width=2.5)
    svg.text(lx + 30, ly + 4, "train", size=12)
    svg.line(lx, ly + 18, lx + 24, ly + 18, stroke=_VAL_COLOR, width=2.5)
    svg.text(lx + 30, ly + 22, "validation", size=12)

    gap = history.final_gap()
    svg.text(left + plot_w, top - 10, f"gap: {gap:g}", size=13, anchor="end")
    svg.text(left, top - 10, "train vs validation accuracy", size=14)
    return svg.document()
