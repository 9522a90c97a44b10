"""Top-1 accuracy, grouped accuracy reports, and percent-change arithmetic.

Accuracies are ratios of integer counts and percent changes are computed
with exact rational arithmetic; rounding happens only when a value is
formatted for display.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

__all__ = [
    "PredictionRecord",
    "GroupStats",
    "AccuracyReport",
    "read_predictions_csv",
    "top1_accuracy",
    "grouped_accuracy",
    "percent_change",
    "format_percent_change",
]

_REQUIRED_COLUMNS = ("item_id", "true_label", "predicted_label")
_ANGLE_GRID = frozenset(range(-90, 95, 5))


@dataclass(frozen=True)
class PredictionRecord:
    """One scored test item; labels compare byte-exact and case-sensitive."""

    item_id: str
    true_label: str
    predicted_label: str
    condition: Mapping[str, str] = field(default_factory=dict)

    @property
    def correct(self) -> bool:
        return self.predicted_label == self.true_label


@dataclass(frozen=True)
class GroupStats:
    count: int
    correct: int
    accuracy: float


@dataclass(frozen=True)
class AccuracyReport:
    overall: float
    total: int
    correct: int
    group_key: str
    by_group: dict[str, GroupStats]

    def to_dict(self) -> dict[str, Any]:
        return {
            "overall": self.overall,
            "total": self.total,
            "correct": self.correct,
            "group_key": self.group_key,
            "by_group": {
                key: {"count": g.count, "correct": g.correct, "accuracy": g.accuracy}
                for key, g in self.by_group.items()
            },
        }


def _validate_angle(raw: str, row: int) -> None:
    try:
        angle = int(raw)
    except ValueError:
        raise ValueError(f"row {row}: angle_deg {raw!r} is not an integer") from None
    if angle not in _ANGLE_GRID:
        raise ValueError(
            f"row {row}: angle_deg {angle} is off the 5-degree grid spanning [-90, 90]"
        )


def read_predictions_csv(path: Path | str) -> list[PredictionRecord]:
    """Parse a predictions CSV.

    Required columns: item_id, true_label, predicted_label. Every other
    column becomes a condition tag (empty cells mean the tag is absent
    for that record). Duplicate item_ids and off-grid angle_deg values
    are schema errors reported with their row numbers.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if header is None:
            raise ValueError(f"{path}: empty CSV, expected a header row")
        missing = [c for c in _REQUIRED_COLUMNS if c not in header]
        if missing:
            raise ValueError(f"{path}: missing required columns: {', '.join(missing)}")
        extra = [c for c in header if c not in _REQUIRED_COLUMNS]
        records: list[PredictionRecord] = []
        seen: dict[str, int] = {}
        for row_num, row in enumerate(reader, start=2):
            if row.get(None) is not None:
                raise ValueError(f"{path}: row {row_num}: more cells than header columns")
            item_id = row["item_id"]
            if item_id is None or item_id == "":
                raise ValueError(f"{path}: row {row_num}: empty item_id")
            if item_id in seen:
                raise ValueError(
                    f"{path}: row {row_num}: duplicate item_id {item_id!r} "
                    f"(first seen at row {seen[item_id]})"
                )
            seen[item_id] = row_num
            condition = {}
            for col in extra:
                value = row.get(col)
                if value:
                    condition[col] = value
            if "angle_deg" in condition:
                _validate_angle(condition["angle_deg"], row_num)
            records.append(
                PredictionRecord(
                    item_id=item_id,
                    true_label=row["true_label"] or "",
                    predicted_label=row["predicted_label"] or "",
                    condition=condition,
                )
            )
    return records


def top1_accuracy(records: list[PredictionRecord]) -> float:
    """Fraction of records whose predicted label equals the true label."""
    if not records:
        raise ValueError("top-1 accuracy is undefined for an empty record list")
    correct = sum(1 for r in records if r.correct)
    return correct / len(records)


def grouped_accuracy(records: list[PredictionRecord], key: str = "class") -> AccuracyReport:
    """Partition records by a condition tag (or "class" = true label) and
    compute per-group and overall top-1 accuracy."""
    if not records:
        raise ValueError("grouped accuracy is undefined for an empty record list")
    if key != "class":
        offenders = [r.item_id for r in records if key not in r.condition]
        if offenders:
            shown = ", ".join(offenders[:10])
            more = "" if len(offenders) <= 10 else f" (and {len(offenders) - 10} more)"
            raise ValueError(f"records missing condition tag {key!r}: {shown}{more}")
    groups: dict[str, list[PredictionRecord]] = {}
    for record in records:
        value = record.true_label if key == "class" else record.condition[key]
        groups.setdefault(value, []).append(record)
    by_group = {}
    for value in sorted(groups):
        members = groups[value]
        correct = sum(1 for r in members if r.correct)
        by_group[value] = GroupStats(len(members), correct, correct / len(members))
    total_correct = sum(1 for r in records if r.correct)
    return AccuracyReport(
        overall=total_correct / len(records),
        total=len(records),
        correct=total_correct,
        group_key=key,
        by_group=by_group,
    )


def percent_change(baseline: float | Fraction, variant: float | Fraction) -> float:
    """100 * (variant - baseline) / baseline, computed exactly then reported
    at full float precision."""
    base = Fraction(baseline)
    if base <= 0:
        raise ValueError(f"baseline must be > 0, got {baseline}")
    var = Fraction(variant)
    if var < 0:
        raise ValueError(f"variant must be >= 0, got {variant}")
    return float(100 * (var - base) / base)


def _round_half_away(value: Fraction, decimals: int) -> Fraction:
    scale = Fraction(10) ** decimals
    scaled = value * scale
    sign = -1 if scaled < 0 else 1
    return sign * Fraction(math.floor(abs(scaled) + Fraction(1, 2))) / scale


def format_percent_change(value: float | Fraction) -> str:
    """Render a signed percentage: one decimal, or two when 0 < |value| < 1
    (so +8.1818 -> "+8.2%", +0.3122 -> "+0.31%", 0 -> "+0.0%"). Ties round
    half away from zero."""
    exact = Fraction(value)
    decimals = 2 if 0 < abs(exact) < 1 else 1
    rounded = _round_half_away(exact, decimals)
    sign = "-" if rounded < 0 else "+"
    quotient, remainder = divmod(abs(rounded) * 10**decimals, 10**decimals)
    frac_digits = str(remainder.numerator).rjust(decimals, "0")
    return f"{sign}{quotient.numerator}.{frac_digits}%"
