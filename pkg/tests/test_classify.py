import math

import pytest

from sortcell.classify import (
    PREDICTIONS_HEADER,
    PredictionRecord,
    StochasticClassifier,
    argmax_category,
    load_confusion,
    load_predictions,
    sample_prediction,
    save_predictions,
    synthesize_stream,
)
from sortcell.errors import SchemaError
from sortcell.layout import CATEGORIES, WasteCategory

from conftest import correct_record, one_hot


def write_rows(path, rows, header=",".join(PREDICTIONS_HEADER)):
    path.write_text(header + "\n" + "\n".join(rows) + "\n", encoding="utf-8")


class TestPredictionRecord:
    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(ValueError, match="sum"):
            PredictionRecord("x", WasteCategory.GLASS, WasteCategory.GLASS, (0.5, 0.1, 0, 0, 0, 0))

    def test_probabilities_must_be_in_unit_interval(self):
        with pytest.raises(ValueError):
            PredictionRecord("x", WasteCategory.GLASS, WasteCategory.GLASS, (1.2, -0.2, 0, 0, 0, 0))

    def test_argmax_ties_break_to_lowest_index(self):
        assert argmax_category((0.5, 0.5, 0, 0, 0, 0)) is WasteCategory.CARDBOARD
        assert argmax_category((0, 0.3, 0.4, 0.3, 0, 0)) is WasteCategory.METAL


class TestLoadPredictions:
    def test_round_trip_of_emitted_fixture(self, tmp_path):
        records = [correct_record(WasteCategory.PLASTIC, "a"), correct_record(WasteCategory.GLASS, "b")]
        path = tmp_path / "p.csv"
        save_predictions(records, path)
        loaded = load_predictions(path)
        assert len(loaded) == 2
        assert [r.item_id for r in loaded] == ["a", "b"]
        assert loaded[0].predicted_label is WasteCategory.PLASTIC

    def test_reserialization_is_semantically_identical(self, tmp_path):
        probs = (0.05, 0.1, 0.15, 0.2, 0.25, 0.25)
        records = [PredictionRecord("x", WasteCategory.GLASS, WasteCategory.PLASTIC, probs)]
        first = tmp_path / "first.csv"
        second = tmp_path / "second.csv"
        save_predictions(records, first)
        save_predictions(load_predictions(first), second)
        a, b = load_predictions(first), load_predictions(second)
        assert a[0].item_id == b[0].item_id
        assert a[0].true_label is b[0].true_label
        assert a[0].predicted_label is b[0].predicted_label
        assert a[0].probabilities == pytest.approx(b[0].probabilities, abs=1e-9)

    def test_bad_probability_sum_is_schema_error(self, tmp_path):
        path = tmp_path / "p.csv"
        write_rows(path, ["a,glass,glass,0.1,0.5,0.1,0.1,0.1,0.0"])  # sums to 0.9
        with pytest.raises(SchemaError, match="line 2"):
            load_predictions(path)

    def test_near_one_sum_is_renormalized(self, tmp_path):
        path = tmp_path / "p.csv"
        write_rows(path, ["a,glass,glass,0.0,0.9995,0.0,0.0,0.0,0.0"])
        (rec,) = load_predictions(path)
        assert sum(rec.probabilities) == pytest.approx(1.0, abs=1e-9)

    def test_pred_argmax_disagreement_is_schema_error(self, tmp_path):
        path = tmp_path / "p.csv"
        write_rows(path, ["a,glass,glass,0.0,0.2,0.8,0.0,0.0,0.0"])  # argmax is metal
        with pytest.raises(SchemaError, match="argmax"):
            load_predictions(path)

    def test_unknown_category_is_schema_error(self, tmp_path):
        path = tmp_path / "p.csv"
        write_rows(path, ["a,organique,glass,0.0,1.0,0.0,0.0,0.0,0.0"])
        with pytest.raises(SchemaError, match="organique"):
            load_predictions(path)

    def test_wrong_header_is_schema_error(self, tmp_path):
        path = tmp_path / "p.csv"
        write_rows(path, ["a,glass,glass,0,1,0,0,0,0"], header="id,true,pred,a,b,c,d,e,f")
        with pytest.raises(SchemaError, match="header"):
            load_predictions(path)

    def test_error_reports_row_number(self, tmp_path):
        path = tmp_path / "p.csv"
        write_rows(
            path,
            [
                "ok,glass,glass,0.0,1.0,0.0,0.0,0.0,0.0",
                "bad,glass,glass,0.0,0.5,0.0,0.0,0.0,0.0",
            ],
        )
        with pytest.raises(SchemaError, match="line 3"):
            load_predictions(path)


class TestStochasticClassifier:
    def test_rows_must_be_stochastic(self):
        rows = [[1.0] + [0.0] * 5 for _ in range(6)]
        rows[2][0] = 0.5  # row sums to 1.5
        with pytest.raises(ValueError, match="sums to"):
            StochasticClassifier(tuple(tuple(r) for r in rows), seed=1)

    def test_negative_entries_rejected(self):
        rows = [[1.0] + [0.0] * 5 for _ in range(6)]
        rows[0] = [1.2, -0.2, 0, 0, 0, 0]
        with pytest.raises(ValueError, match="negative"):
            StochasticClassifier(tuple(tuple(r) for r in rows), seed=1)

    def test_identity_always_predicts_true_label(self):
        clf = StochasticClassifier.identity(seed=99)
        for i, cat in enumerate(CATEGORIES):
            rec = sample_prediction(clf, cat, i)
            assert rec.predicted_label is cat
            assert rec.misclassified is False

    def test_point_mass_row(self):
        # glass row is a point mass on plastic -> plastic always
        rows = [tuple(1.0 if i == j else 0.0 for j in range(6)) for i in range(6)]
        rows[CATEGORIES.index(WasteCategory.GLASS)] = (0.0, 0.0, 0.0, 0.0, 1.0, 0.0)
        clf = StochasticClassifier(tuple(rows), seed=7)
        for draw in range(50):
            assert sample_prediction(clf, WasteCategory.GLASS, draw).predicted_label is WasteCategory.PLASTIC

    def test_sampled_record_carries_classifier_row(self):
        clf = StochasticClassifier.uniform_diagonal(0.8, seed=3)
        rec = sample_prediction(clf, WasteCategory.METAL, 0)
        assert rec.probabilities == clf.confusion_probs[CATEGORIES.index(WasteCategory.METAL)]

    def test_sampling_is_deterministic_and_random_access(self):
        clf = StochasticClassifier.uniform_diagonal(0.7, seed=2024)
        sequence = [sample_prediction(clf, WasteCategory.PAPER, i).predicted_label for i in range(200)]
        again = [sample_prediction(clf, WasteCategory.PAPER, i).predicted_label for i in range(200)]
        assert sequence == again
        # Random access: drawing index 137 alone matches its place in the sequence.
        assert sample_prediction(clf, WasteCategory.PAPER, 137).predicted_label is sequence[137]

    def test_different_seeds_differ(self):
        a = StochasticClassifier.uniform_diagonal(0.5, seed=1)
        b = StochasticClassifier.uniform_diagonal(0.5, seed=2)
        seq_a = [sample_prediction(a, WasteCategory.TRASH, i).predicted_label for i in range(64)]
        seq_b = [sample_prediction(b, WasteCategory.TRASH, i).predicted_label for i in range(64)]
        assert seq_a != seq_b

    def test_diagonal_rate_law_of_large_numbers(self):
        # 100k draws of one row at a fixed seed: diagonal rate 0.80 +/- 0.01.
        clf = StochasticClassifier.uniform_diagonal(0.8, seed=42)
        hits = sum(
            sample_prediction(clf, WasteCategory.CARDBOARD, i).predicted_label is WasteCategory.CARDBOARD
            for i in range(100_000)
        )
        assert hits / 100_000 == pytest.approx(0.80, abs=0.01)

    def test_row_convergence_within_four_sigma(self):
        # Empirical row frequencies within 4*sqrt(p(1-p)/N) per cell, fixed seed.
        clf = StochasticClassifier.uniform_diagonal(0.8, seed=123)
        n = 100_000
        counts = {c: 0 for c in CATEGORIES}
        for i in range(n):
            counts[sample_prediction(clf, WasteCategory.GLASS, i).predicted_label] += 1
        row = clf.confusion_probs[CATEGORIES.index(WasteCategory.GLASS)]
        for cat, p in zip(CATEGORIES, row):
            bound = 4.0 * math.sqrt(p * (1.0 - p) / n)
            assert abs(counts[cat] / n - p) <= bound


class TestSynthesizeStream:
    def test_round_robin_true_labels(self):
        clf = StochasticClassifier.identity(seed=5)
        stream = synthesize_stream(clf, 13)
        assert [r.true_label for r in stream] == [CATEGORIES[i % 6] for i in range(13)]
        assert stream[0].item_id == "item-000000"

    def test_requires_positive_items(self):
        with pytest.raises(ValueError):
            synthesize_stream(StochasticClassifier.identity(0), 0)


class TestLoadConfusion:
    def test_round_trip(self, tmp_path):
        import json

        rows = {c.value: [0.8 if i == j else 0.04 for i in range(6)] for j, c in enumerate(CATEGORIES)}
        path = tmp_path / "conf.json"
        path.write_text(json.dumps({"confusion": rows}))
        matrix = load_confusion(path)
        assert matrix[0][0] == 0.8
        StochasticClassifier(matrix, seed=0)  # validates

    def test_missing_row_is_schema_error(self, tmp_path):
        import json

        rows = {c.value: [0.8 if i == j else 0.04 for i in range(6)] for j, c in enumerate(CATEGORIES)}
        del rows["paper"]
        path = tmp_path / "conf.json"
        path.write_text(json.dumps({"confusion": rows}))
        with pytest.raises(SchemaError, match="paper"):
            load_confusion(path)


def test_one_hot_helper_consistency():
    rec = correct_record(WasteCategory.METAL)
    assert rec.probabilities == one_hot(WasteCategory.METAL)
    assert argmax_category(rec.probabilities) is WasteCategory.METAL
