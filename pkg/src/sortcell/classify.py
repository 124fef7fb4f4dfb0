"""Classification outcomes for the simulator.

Two sources: a predictions CSV produced by an external trainer, or a
seeded stochastic classifier that draws predicted labels from a
row-stochastic confusion-probability matrix (a stand-in for a trained
model when only its error profile is known).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path as FilePath
from typing import Iterable, Sequence

from .errors import SchemaError
from .layout import CATEGORIES, WasteCategory, parse_category

PREDICTIONS_HEADER = (
    "item_id",
    "true_label",
    "pred_label",
    "p_cardboard",
    "p_glass",
    "p_metal",
    "p_paper",
    "p_plastic",
    "p_trash",
)

_ROW_SUM_FILE_TOL = 1e-3   # ingest tolerance before renormalizing
_ROW_SUM_TOL = 1e-6        # invariant on constructed records
_MASK64 = (1 << 64) - 1
_GOLDEN64 = 0x9E3779B97F4A7C15


def argmax_category(probabilities: Sequence[float]) -> WasteCategory:
    """Index of the largest probability; ties break toward the lowest canonical index."""
    best = 0
    for i in range(1, len(probabilities)):
        if probabilities[i] > probabilities[best]:
            best = i
    return CATEGORIES[best]


@dataclass(frozen=True)
class PredictionRecord:
    """One classified item: its true label, predicted label, and 6-way probabilities.

    Probabilities are in canonical category order. File-ingested records
    additionally satisfy predicted_label == argmax(probabilities); sampled
    records carry the sampling row itself, whose argmax may differ from the
    sampled label.
    """

    item_id: str
    true_label: WasteCategory
    predicted_label: WasteCategory
    probabilities: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probabilities)
        object.__setattr__(self, "probabilities", probs)
        if len(probs) != len(CATEGORIES):
            raise ValueError(f"expected {len(CATEGORIES)} probabilities, got {len(probs)}")
        if any(not (0.0 <= p <= 1.0) for p in probs):
            raise ValueError(f"probabilities must lie in [0, 1], got {probs}")
        total = sum(probs)
        if abs(total - 1.0) > _ROW_SUM_TOL:
            raise ValueError(f"probabilities must sum to 1 within {_ROW_SUM_TOL}, got {total}")

    @property
    def misclassified(self) -> bool:
        return self.true_label is not self.predicted_label


@dataclass(frozen=True)
class StochasticClassifier:
    """Seeded sampler over a 6x6 row-stochastic confusion-probability matrix.

    Row = true class, column = predicted class, both in canonical order.
    Sampling is stateless and keyed by (seed, draw_index), so disjoint
    index ranges can be drawn concurrently with identical results.
    """

    confusion_probs: tuple[tuple[float, ...], ...]
    seed: int

    def __post_init__(self):
        rows = tuple(tuple(float(p) for p in row) for row in self.confusion_probs)
        object.__setattr__(self, "confusion_probs", rows)
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)
        if len(rows) != len(CATEGORIES) or any(len(r) != len(CATEGORIES) for r in rows):
            raise ValueError("confusion_probs must be a 6x6 matrix in canonical category order")
        for cat, row in zip(CATEGORIES, rows):
            if any(p < 0 or not math.isfinite(p) for p in row):
                raise ValueError(f"row for {cat.value} has negative or non-finite entries")
            total = sum(row)
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"row for {cat.value} sums to {total}, expected 1 within 1e-9")

    @classmethod
    def identity(cls, seed: int = 0) -> "StochasticClassifier":
        rows = tuple(
            tuple(1.0 if i == j else 0.0 for j in range(len(CATEGORIES)))
            for i in range(len(CATEGORIES))
        )
        return cls(rows, seed)

    @classmethod
    def uniform_diagonal(cls, diagonal: float, seed: int) -> "StochasticClassifier":
        """Matrix with `diagonal` on the diagonal and the remainder spread evenly."""
        n = len(CATEGORIES)
        off = (1.0 - diagonal) / (n - 1)
        rows = tuple(
            tuple(diagonal if i == j else off for j in range(n)) for i in range(n)
        )
        return cls(rows, seed)


def _splitmix64(state: int) -> int:
    """SplitMix64 output function (Steele, Lea & Flood's finalizer)."""
    z = state & _MASK64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def _unit_draw(seed: int, draw_index: int) -> float:
    """The draw_index-th value of the SplitMix64 stream seeded by `seed`, in [0, 1).

    Random access: output i of the stream is splitmix64(seed + (i + 1) * GOLDEN),
    so draws need no sequential state. The generator algorithm is fixed; the
    same (seed, draw_index) yields the same value on every platform and release.
    """
    if draw_index < 0:
        raise ValueError(f"draw_index must be >= 0, got {draw_index}")
    state = (seed + (draw_index + 1) * _GOLDEN64) & _MASK64
    return _splitmix64(state) / 2.0**64


def sample_prediction(
    clf: StochasticClassifier, true_label: WasteCategory, draw_index: int, item_id: str | None = None
) -> PredictionRecord:
    """Draw one predicted label for an item whose true class is known.

    The predicted label follows the classifier row for true_label via inverse
    CDF over a deterministic unit draw keyed by (seed, draw_index). The
    record's probability vector is that row itself.
    """
    row = clf.confusion_probs[CATEGORIES.index(true_label)]
    u = _unit_draw(clf.seed, draw_index)
    cumulative = 0.0
    predicted = CATEGORIES[-1]  # float residue lands in the last bucket
    for cat, p in zip(CATEGORIES, row):
        cumulative += p
        if u < cumulative:
            predicted = cat
            break
    return PredictionRecord(
        item_id=item_id if item_id is not None else f"item-{draw_index:06d}",
        true_label=true_label,
        predicted_label=predicted,
        probabilities=row,
    )


def synthesize_stream(clf: StochasticClassifier, items: int) -> list[PredictionRecord]:
    """Sample a stream of `items` records with round-robin true labels.

    True label of item i is category i mod 6, so every class appears with
    (near-)equal frequency; the draw index is i.
    """
    if items <= 0:
        raise ValueError(f"items must be > 0, got {items}")
    n = len(CATEGORIES)
    return [sample_prediction(clf, CATEGORIES[i % n], i) for i in range(items)]


def load_predictions(path: str | FilePath) -> list[PredictionRecord]:
    """Read a predictions CSV, validating every row.

    Probability rows within 1e-3 of summing to 1 are renormalized (CSV float
    drift); larger deviations, unknown labels, and pred/argmax disagreement
    are schema errors reported with the file line number.
    """
    path = FilePath(path)
    records: list[PredictionRecord] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("empty file, expected predictions header", path=str(path)) from None
        if tuple(header) != PREDICTIONS_HEADER:
            raise SchemaError(
                f"bad header {header!r}, expected {','.join(PREDICTIONS_HEADER)}",
                path=str(path),
                line=1,
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(PREDICTIONS_HEADER):
                raise SchemaError(
                    f"expected {len(PREDICTIONS_HEADER)} fields, got {len(row)}",
                    path=str(path),
                    line=line_no,
                )
            item_id, true_name, pred_name = row[0], row[1], row[2]
            try:
                true_label = parse_category(true_name)
                pred_label = parse_category(pred_name)
            except ValueError as exc:
                raise SchemaError(str(exc), path=str(path), line=line_no) from None
            try:
                probs = [float(v) for v in row[3:]]
            except ValueError:
                raise SchemaError(f"non-numeric probability in {row[3:]!r}", path=str(path), line=line_no) from None
            if any(not (0.0 <= p <= 1.0) for p in probs):
                raise SchemaError(f"probabilities outside [0, 1]: {probs}", path=str(path), line=line_no)
            total = sum(probs)
            if abs(total - 1.0) > _ROW_SUM_FILE_TOL:
                raise SchemaError(
                    f"probabilities sum to {total:.6f}, expected 1 within {_ROW_SUM_FILE_TOL}",
                    path=str(path),
                    line=line_no,
                )
            if argmax_category(probs) is not pred_label:
                raise SchemaError(
                    f"pred_label {pred_label.value!r} does not match probability argmax "
                    f"{argmax_category(probs).value!r}",
                    path=str(path),
                    line=line_no,
                )
            normalized = tuple(p / total for p in probs)
            records.append(PredictionRecord(item_id, true_label, pred_label, normalized))
    return records


def save_predictions(records: Iterable[PredictionRecord], path: str | FilePath) -> None:
    """Write records as a predictions CSV (UTF-8, LF, 9-decimal probabilities)."""
    path = FilePath(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PREDICTIONS_HEADER)
        for rec in records:
            writer.writerow(
                [rec.item_id, rec.true_label.value, rec.predicted_label.value]
                + [f"{p:.9f}" for p in rec.probabilities]
            )


def load_confusion(path: str | FilePath) -> tuple[tuple[float, ...], ...]:
    """Read a confusion-probability JSON file into a canonical-order matrix.

    Schema: {"confusion": {"cardboard": [6 probabilities], ...}} with all six
    category keys; each row must be nonnegative and sum to 1 within 1e-9.
    """
    path = FilePath(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc.msg}", path=str(path), line=exc.lineno) from None
    if not isinstance(doc, dict) or "confusion" not in doc or not isinstance(doc["confusion"], dict):
        raise SchemaError('expected {"confusion": {category: [6 probabilities], ...}}', path=str(path))
    table = doc["confusion"]
    rows: list[tuple[float, ...]] = []
    for cat in CATEGORIES:
        if cat.value not in table:
            raise SchemaError(f"missing confusion row for {cat.value!r}", path=str(path))
        row = table[cat.value]
        if not isinstance(row, list) or len(row) != len(CATEGORIES) or any(
            isinstance(v, bool) or not isinstance(v, (int, float)) for v in row
        ):
            raise SchemaError(f"row for {cat.value!r} must be a list of 6 numbers", path=str(path))
        rows.append(tuple(float(v) for v in row))
    unknown = set(table) - {c.value for c in CATEGORIES}
    if unknown:
        raise SchemaError(f"unknown categories in confusion table: {sorted(unknown)}", path=str(path))
    return tuple(rows)
