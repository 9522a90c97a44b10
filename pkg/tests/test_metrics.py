"""Accuracy tallies, exact percent-change arithmetic, and CSV parsing."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import write_prediction_rows
from shadowforge import (
    PredictionRecord,
    format_percent_change,
    grouped_accuracy,
    percent_change,
    read_predictions_csv,
    top1_accuracy,
)

# accuracy pairs with their externally rounded percent changes; the rounded
# figure carries one decimal, or two when the change sits below one percent
DELTA_CASES = [
    (0.665, 0.672, 1.1),
    (0.440, 0.476, 8.2),
    (0.304, 0.332, 9.2),
    (0.696, 0.701, 0.7),
    (0.436, 0.477, 9.4),
    (0.377, 0.478, 26.8),
    (0.695, 0.704, 1.3),
    (0.393, 0.463, 17.8),
    (0.532, 0.590, 10.9),
    (0.961, 0.964, 0.31),
    (0.281, 0.308, 9.6),
    (0.264, 0.291, 10.2),
]


def _record(i, true, pred, **condition):
    return PredictionRecord(f"item{i:03d}", true, pred, condition)


class TestTop1Accuracy:
    def test_exact_fraction(self):
        records = [_record(i, "a", "a" if i < 3 else "b") for i in range(8)]
        assert top1_accuracy(records) == 3 / 8

    def test_labels_compare_case_sensitive(self):
        assert not _record(0, "Cat", "cat").correct
        assert _record(1, "cat", "cat").correct

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            top1_accuracy([])

    def test_all_correct(self):
        records = [_record(i, "z", "z") for i in range(5)]
        assert top1_accuracy(records) == 1.0


class TestGroupedAccuracy:
    def test_matches_independent_tally(self):
        rng = random.Random(404)
        labels = ["a", "b", "c", "d", "e"]
        records = [
            _record(i, rng.choice(labels), rng.choice(labels)) for i in range(500)
        ]
        report = grouped_accuracy(records)

        counts, hits = {}, {}
        for r in records:
            counts[r.true_label] = counts.get(r.true_label, 0) + 1
            hits[r.true_label] = hits.get(r.true_label, 0) + (
                1 if r.predicted_label == r.true_label else 0
            )
        assert set(report.by_group) == set(counts)
        for label, stats in report.by_group.items():
            assert stats.count == counts[label]
            assert stats.correct == hits[label]
            assert stats.accuracy == hits[label] / counts[label]
        assert report.correct == sum(hits.values())
        assert report.total == 500
        assert report.overall == report.correct / 500

    def test_group_counts_partition_total(self):
        rng = random.Random(11)
        records = [_record(i, rng.choice("xy"), rng.choice("xy")) for i in range(80)]
        report = grouped_accuracy(records)
        assert sum(s.count for s in report.by_group.values()) == report.total
        assert sum(s.correct for s in report.by_group.values()) == report.correct

    def test_groups_sorted(self):
        records = [_record(0, "zebra", "zebra"), _record(1, "ant", "ant")]
        assert list(grouped_accuracy(records).by_group) == ["ant", "zebra"]

    def test_group_by_condition_tag(self):
        records = [
            _record(0, "a", "a", camera="left"),
            _record(1, "a", "b", camera="left"),
            _record(2, "a", "a", camera="right"),
        ]
        report = grouped_accuracy(records, key="camera")
        assert report.group_key == "camera"
        assert report.by_group["left"].accuracy == 0.5
        assert report.by_group["right"].accuracy == 1.0

    def test_missing_tag_names_offenders(self):
        records = [_record(i, "a", "a") for i in range(12)]
        with pytest.raises(ValueError) as err:
            grouped_accuracy(records, key="camera")
        message = str(err.value)
        assert "item000" in message and "item009" in message
        assert "(and 2 more)" in message
        assert "item011" not in message

    def test_to_dict_shape(self):
        records = [_record(0, "a", "a"), _record(1, "b", "a")]
        payload = grouped_accuracy(records).to_dict()
        assert payload["overall"] == 0.5
        assert payload["total"] == 2 and payload["correct"] == 1
        assert payload["group_key"] == "class"
        assert payload["by_group"]["a"]["accuracy"] == 1.0


class TestPercentChange:
    def test_reference_deltas_within_half_a_tenth(self):
        for baseline, variant, printed in DELTA_CASES:
            assert abs(percent_change(baseline, variant) - printed) <= 0.05

    def test_exact_rational_cases(self):
        assert percent_change(800, 801) == 0.125
        assert percent_change(0.5, 0.75) == 50.0
        assert percent_change(0.5, 0.25) == -50.0
        assert percent_change(0.3, 0.3) == 0.0

    def test_input_validation(self):
        with pytest.raises(ValueError):
            percent_change(0.0, 0.5)
        with pytest.raises(ValueError):
            percent_change(-0.1, 0.5)
        with pytest.raises(ValueError):
            percent_change(0.5, -0.1)
        assert percent_change(0.5, 0.0) == -100.0

    @given(
        baseline=st.floats(0.01, 10.0),
        rate=st.floats(-0.5, 0.5),
    )
    @settings(max_examples=200, deadline=None)
    def test_relative_rate_identity(self, baseline, rate):
        got = percent_change(baseline, baseline * (1.0 + rate))
        assert math.isclose(got, 100.0 * rate, rel_tol=1e-9, abs_tol=1e-9)


class TestFormatPercentChange:
    def test_reference_renderings(self):
        assert format_percent_change(percent_change(0.440, 0.476)) == "+8.2%"
        assert format_percent_change(percent_change(0.961, 0.964)) == "+0.31%"
        assert format_percent_change(percent_change(0.393, 0.463)) == "+17.8%"

    def test_small_magnitudes_get_two_decimals(self):
        # values below one percent render with two decimals, at either sign
        assert format_percent_change(percent_change(0.696, 0.701)) == "+0.72%"
        assert format_percent_change(-0.3122) == "-0.31%"

    def test_zero_renders_positive_one_decimal(self):
        assert format_percent_change(0.0) == "+0.0%"

    def test_ties_round_away_from_zero(self):
        assert format_percent_change(0.125) == "+0.13%"
        assert format_percent_change(-0.125) == "-0.13%"
        assert format_percent_change(1.25) == "+1.3%"
        assert format_percent_change(-1.25) == "-1.3%"

    def test_boundary_magnitudes(self):
        assert format_percent_change(1.0) == "+1.0%"
        assert format_percent_change(0.999) == "+1.00%"
        assert format_percent_change(26.849) == "+26.8%"


class TestReadPredictionsCsv:
    HEADER = ("item_id", "true_label", "predicted_label")

    def test_happy_path_with_tags(self, tmp_path):
        path = tmp_path / "preds.csv"
        write_prediction_rows(
            path,
            [
                ("i1", "cat", "cat", "0", "s1"),
                ("i2", "dog", "cat", "45", ""),
            ],
            self.HEADER + ("angle_deg", "session"),
        )
        records = read_predictions_csv(path)
        assert [r.item_id for r in records] == ["i1", "i2"]
        assert records[0].condition == {"angle_deg": "0", "session": "s1"}
        # empty cell means the tag is absent for that record
        assert records[1].condition == {"angle_deg": "45"}
        assert records[0].correct and not records[1].correct

    def test_missing_required_column(self, tmp_path):
        path = tmp_path / "preds.csv"
        write_prediction_rows(path, [("i1", "cat")], ("item_id", "true_label"))
        with pytest.raises(ValueError) as err:
            read_predictions_csv(path)
        assert "predicted_label" in str(err.value)

    def test_duplicate_item_id_reports_both_rows(self, tmp_path):
        path = tmp_path / "preds.csv"
        write_prediction_rows(
            path, [("i1", "a", "a"), ("i2", "a", "a"), ("i1", "b", "b")], self.HEADER
        )
        with pytest.raises(ValueError) as err:
            read_predictions_csv(path)
        message = str(err.value)
        assert "row 4" in message and "row 2" in message

    def test_row_with_extra_cells_rejected(self, tmp_path):
        path = tmp_path / "preds.csv"
        path.write_text(
            "item_id,true_label,predicted_label\ni1,a,a,surprise\n", encoding="utf-8"
        )
        with pytest.raises(ValueError) as err:
            read_predictions_csv(path)
        assert "row 2" in str(err.value)

    def test_empty_item_id_rejected(self, tmp_path):
        path = tmp_path / "preds.csv"
        write_prediction_rows(path, [("", "a", "a")], self.HEADER)
        with pytest.raises(ValueError):
            read_predictions_csv(path)

    def test_off_grid_angle_rejected(self, tmp_path):
        path = tmp_path / "preds.csv"
        write_prediction_rows(
            path, [("i1", "a", "a", "42")], self.HEADER + ("angle_deg",)
        )
        with pytest.raises(ValueError) as err:
            read_predictions_csv(path)
        assert "row 2" in str(err.value)

    def test_grid_angles_accepted(self, tmp_path):
        path = tmp_path / "preds.csv"
        rows = [(f"i{a}", "a", "a", str(a)) for a in range(-90, 95, 5)]
        write_prediction_rows(path, rows, self.HEADER + ("angle_deg",))
        assert len(read_predictions_csv(path)) == 37

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "preds.csv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(ValueError):
            read_predictions_csv(path)

    def test_missing_file_raises_file_not_found(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_predictions_csv(tmp_path / "absent.csv")
