"""Evaluation metrics: confusion matrix, precision/recall/F1, accuracy gap."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path as FilePath
from typing import Iterable, NamedTuple, Sequence

from .classify import PredictionRecord
from .errors import SchemaError
from .layout import CATEGORIES, WasteCategory

HISTORY_HEADER = ("epoch", "train_accuracy", "val_accuracy")


@dataclass(frozen=True)
class ConfusionMatrix:
    """6x6 count table; row = true class, column = predicted class."""

    counts: tuple[tuple[int, ...], ...]
    total: int

    def __post_init__(self):
        counts = tuple(tuple(int(c) for c in row) for row in self.counts)
        object.__setattr__(self, "counts", counts)
        n = len(CATEGORIES)
        if len(counts) != n or any(len(row) != n for row in counts):
            raise ValueError("confusion matrix must be 6x6 in canonical category order")
        if any(c < 0 for row in counts for c in row):
            raise ValueError("confusion counts must be nonnegative")
        if self.total != sum(c for row in counts for c in row):
            raise ValueError("total must equal the sum of all cells")

    def cell(self, true: WasteCategory, predicted: WasteCategory) -> int:
        return self.counts[CATEGORIES.index(true)][CATEGORIES.index(predicted)]

    def row_sum(self, c: WasteCategory) -> int:
        return sum(self.counts[CATEGORIES.index(c)])

    def col_sum(self, c: WasteCategory) -> int:
        j = CATEGORIES.index(c)
        return sum(row[j] for row in self.counts)

    @property
    def trace(self) -> int:
        return sum(self.counts[i][i] for i in range(len(CATEGORIES)))


@dataclass(frozen=True)
class ClassMetrics:
    """Per-class precision/recall/F1. `defined` is False when either the
    class never occurs as a true label or never as a prediction; the zero
    metric values are then placeholders, not measurements."""

    precision: float
    recall: float
    f1: float
    defined: bool


class EpochRecord(NamedTuple):
    epoch: int
    train_accuracy: float  # percent
    val_accuracy: float    # percent


@dataclass(frozen=True)
class TrainingHistory:
    """Per-epoch train/validation accuracies, in percent."""

    epochs: tuple[EpochRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "epochs", tuple(EpochRecord(*e) for e in self.epochs))
        last = 0
        for rec in self.epochs:
            if rec.epoch <= last:
                raise ValueError(f"epoch numbers must be strictly increasing positives, got {rec.epoch} after {last}")
            if not (0.0 <= rec.train_accuracy <= 100.0 and 0.0 <= rec.val_accuracy <= 100.0):
                raise ValueError(f"accuracies must lie in [0, 100], got {rec}")
            last = rec.epoch

    def final_gap(self) -> float:
        """Accuracy gap (train - validation) of the last epoch."""
        if not self.epochs:
            raise ValueError("history is empty")
        last = self.epochs[-1]
        return accuracy_gap(last.train_accuracy, last.val_accuracy)


def build_confusion(records: Iterable[PredictionRecord]) -> ConfusionMatrix:
    """Count (true, predicted) pairs over a record stream; order-invariant."""
    n = len(CATEGORIES)
    counts = [[0] * n for _ in range(n)]
    total = 0
    for rec in records:
        counts[CATEGORIES.index(rec.true_label)][CATEGORIES.index(rec.predicted_label)] += 1
        total += 1
    return ConfusionMatrix(tuple(tuple(row) for row in counts), total)


def class_metrics(cm: ConfusionMatrix, c: WasteCategory) -> ClassMetrics:
    """Precision, recall, and F1 for one class.

    Zero-denominator cases yield 0 with defined=False instead of NaN, so
    reports stay totally ordered and serializable.
    """
    tp = cm.cell(c, c)
    row = cm.row_sum(c)
    col = cm.col_sum(c)
    precision = tp / col if col > 0 else 0.0
    recall = tp / row if row > 0 else 0.0
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return ClassMetrics(precision, recall, f1, defined=row > 0 and col > 0)


def overall_accuracy(cm: ConfusionMatrix) -> float:
    """Percent of records on the diagonal."""
    if cm.total <= 0:
        raise ValueError("accuracy is undefined for an empty confusion matrix")
    return 100.0 * cm.trace / cm.total


def accuracy_gap(train_accuracy: float, val_accuracy: float) -> float:
    """Train accuracy minus validation accuracy, both in percent.

    Negative gaps are legal (validation above train) and flagged as anomalous
    by reporting layers. Subtraction runs in decimal so that percentages with
    short decimal representations subtract without binary noise
    (99.8 - 80.5 -> exactly 19.3).
    """
    for name, v in (("train_accuracy", train_accuracy), ("val_accuracy", val_accuracy)):
        if not (0.0 <= v <= 100.0):
            raise ValueError(f"{name} must lie in [0, 100], got {v}")
    return float(Decimal(repr(float(train_accuracy))) - Decimal(repr(float(val_accuracy))))


def load_history(path: str | FilePath) -> TrainingHistory:
    """Read a training-history CSV (`epoch,train_accuracy,val_accuracy`, percent)."""
    path = FilePath(path)
    rows: list[EpochRecord] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("empty file, expected history header", path=str(path)) from None
        if tuple(header) != HISTORY_HEADER:
            raise SchemaError(
                f"bad header {header!r}, expected {','.join(HISTORY_HEADER)}", path=str(path), line=1
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise SchemaError(f"expected 3 fields, got {len(row)}", path=str(path), line=line_no)
            try:
                epoch = int(row[0])
                train = float(row[1])
                val = float(row[2])
            except ValueError:
                raise SchemaError(f"non-numeric history row {row!r}", path=str(path), line=line_no) from None
            if epoch <= 0 or (rows and epoch <= rows[-1].epoch):
                raise SchemaError(
                    f"epoch numbers must be strictly increasing positives, got {epoch}",
                    path=str(path),
                    line=line_no,
                )
            if not (0.0 <= train <= 100.0 and 0.0 <= val <= 100.0):
                raise SchemaError(f"accuracies must lie in [0, 100], got {row!r}", path=str(path), line=line_no)
            rows.append(EpochRecord(epoch, train, val))
    return TrainingHistory(tuple(rows))


def metrics_report(
    records: Sequence[PredictionRecord], history: TrainingHistory | None = None
) -> dict:
    """Assemble the metrics-report document: per-class metrics, macro averages,
    overall accuracy, and (when history is given) the final accuracy gap."""
    cm = build_confusion(records)
    per_class = {c: class_metrics(cm, c) for c in CATEGORIES}
    n = len(CATEGORIES)
    report = {
        "per_class": {
            c.value: {
                "precision": m.precision,
                "recall": m.recall,
                "f1": m.f1,
                "defined": m.defined,
            }
            for c, m in per_class.items()
        },
        "overall_accuracy": overall_accuracy(cm),
        "macro_precision": sum(m.precision for m in per_class.values()) / n,
        "macro_recall": sum(m.recall for m in per_class.values()) / n,
        "macro_f1": sum(m.f1 for m in per_class.values()) / n,
        "accuracy_gap": None,
        "accuracy_gap_anomalous": None,
    }
    if history is not None:
        gap = history.final_gap()
        report["accuracy_gap"] = gap
        report["accuracy_gap_anomalous"] = gap < 0
    return report
