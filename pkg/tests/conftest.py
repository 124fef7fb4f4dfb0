import pytest

from sortcell.classify import PredictionRecord
from sortcell.layout import CATEGORIES, WasteCategory, default_layout, save_layout


def one_hot(category: WasteCategory) -> tuple[float, ...]:
    return tuple(1.0 if c is category else 0.0 for c in CATEGORIES)


def correct_record(category: WasteCategory, item_id: str = "item") -> PredictionRecord:
    return PredictionRecord(item_id, category, category, one_hot(category))


def uniform_correct_stream(n: int) -> list[PredictionRecord]:
    """n records cycling through the categories, all classified correctly."""
    return [
        correct_record(CATEGORIES[i % len(CATEGORIES)], f"item-{i:04d}")
        for i in range(n)
    ]


@pytest.fixture
def layout_file(tmp_path):
    path = tmp_path / "layout.json"
    save_layout(default_layout(), path)
    return path
