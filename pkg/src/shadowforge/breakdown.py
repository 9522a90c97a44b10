"""Accuracy-vs-pose curves and breakdown-point detection.

A breakdown point is the first pose angle, scanning outward from 0 in 5
degree steps, at which top-1 accuracy either falls strictly below the
accuracy floor (default 0.60) or loses strictly more than the drop
threshold (default 0.15, i.e. 15 percentage points) relative to the
previous step. A side with no trigger reports +/-90, meaning no
breakdown within the measured range.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

from .metrics import PredictionRecord, _round_half_away, top1_accuracy

__all__ = [
    "ANGLE_GRID",
    "AccuracyCurve",
    "BreakdownConfig",
    "BreakdownResult",
    "curve_from_predictions",
    "detect_breakdown",
    "average_breakdowns",
    "format_degrees",
    "load_curve_csv",
    "save_curve_csv",
]

ANGLE_GRID: tuple[int, ...] = tuple(range(-90, 95, 5))  # 37 samples
_GRID_SET = frozenset(ANGLE_GRID)


@dataclass(frozen=True)
class AccuracyCurve:
    """Top-1 accuracy on the uniform 5-degree grid spanning [-90, 90]."""

    angles: tuple[int, ...]
    accuracies: tuple[float, ...]

    def __post_init__(self) -> None:
        angles = tuple(int(a) for a in self.angles)
        accuracies = tuple(float(a) for a in self.accuracies)
        if angles != ANGLE_GRID:
            raise ValueError(
                "curve must cover exactly the 5-degree grid from -90 to 90 (37 angles)"
            )
        if len(accuracies) != len(angles):
            raise ValueError(
                f"need one accuracy per angle: {len(accuracies)} != {len(angles)}"
            )
        for angle, acc in zip(angles, accuracies):
            if not 0.0 <= acc <= 1.0:
                raise ValueError(f"accuracy at {angle} deg must lie in [0, 1], got {acc}")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "accuracies", accuracies)

    def accuracy_at(self, angle: int) -> float:
        return self.accuracies[ANGLE_GRID.index(angle)]

    @classmethod
    def from_mapping(cls, values: dict[int, float]) -> "AccuracyCurve":
        missing = [a for a in ANGLE_GRID if a not in values]
        if missing:
            raise ValueError(f"missing grid angles: {', '.join(str(a) for a in missing)}")
        return cls(ANGLE_GRID, tuple(values[a] for a in ANGLE_GRID))


@dataclass(frozen=True)
class BreakdownConfig:
    accuracy_floor: float = 0.60
    drop_threshold: float = 0.15
    step_deg: int = 5

    def __post_init__(self) -> None:
        if not 0.0 < self.accuracy_floor < 1.0:
            raise ValueError(f"accuracy_floor must lie in (0, 1), got {self.accuracy_floor}")
        if not 0.0 < self.drop_threshold < 1.0:
            raise ValueError(f"drop_threshold must lie in (0, 1), got {self.drop_threshold}")
        if self.step_deg != 5:
            raise ValueError("only the 5-degree grid is supported")


@dataclass(frozen=True)
class BreakdownResult:
    """Breakdown angles per side; an untriggered side reports +/-90."""

    positive: int
    negative: int
    positive_triggered: bool
    negative_triggered: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "positive": self.positive,
            "negative": self.negative,
            "positive_triggered": self.positive_triggered,
            "negative_triggered": self.negative_triggered,
        }


def curve_from_predictions(records: list[PredictionRecord]) -> AccuracyCurve:
    """Assemble per-angle top-1 accuracy into a curve.

    Every record must carry an angle_deg condition and every grid angle
    needs at least one record.
    """
    missing_tag = [r.item_id for r in records if "angle_deg" not in r.condition]
    if missing_tag:
        shown = ", ".join(missing_tag[:10])
        more = "" if len(missing_tag) <= 10 else f" (and {len(missing_tag) - 10} more)"
        raise ValueError(f"records missing angle_deg: {shown}{more}")
    buckets: dict[int, list[PredictionRecord]] = {}
    for record in records:
        angle = int(record.condition["angle_deg"])
        if angle not in _GRID_SET:
            raise ValueError(f"record {record.item_id}: angle_deg {angle} is off the grid")
        buckets.setdefault(angle, []).append(record)
    absent = [a for a in ANGLE_GRID if a not in buckets]
    if absent:
        raise ValueError(f"missing grid angles: {', '.join(str(a) for a in absent)}")
    return AccuracyCurve(ANGLE_GRID, tuple(top1_accuracy(buckets[a]) for a in ANGLE_GRID))


def detect_breakdown(curve: AccuracyCurve, cfg: BreakdownConfig | None = None) -> BreakdownResult:
    """Scan outward from 0 degrees and return the first trigger per side.

    Trigger conditions (both strict): accuracy below the floor, or a loss
    of more than the drop threshold versus the previous (inner) step. An
    origin already below the floor puts the breakdown at 0 on both sides.
    """
    cfg = cfg or BreakdownConfig()
    acc = curve.accuracy_at
    if acc(0) < cfg.accuracy_floor:
        return BreakdownResult(0, 0, True, True)
    positive, positive_triggered = 90, False
    for theta in range(5, 95, 5):
        if acc(theta) < cfg.accuracy_floor or acc(theta - 5) - acc(theta) > cfg.drop_threshold:
            positive, positive_triggered = theta, True
            break
    negative, negative_triggered = -90, False
    for theta in range(-5, -95, -5):
        if acc(theta) < cfg.accuracy_floor or acc(theta + 5) - acc(theta) > cfg.drop_threshold:
            negative, negative_triggered = theta, True
            break
    return BreakdownResult(positive, negative, positive_triggered, negative_triggered)


def average_breakdowns(results: Iterable[BreakdownResult]) -> tuple[float, float]:
    """Unweighted arithmetic means of the positive and negative angles."""
    results = list(results)
    if not results:
        raise ValueError("average of zero breakdown results is undefined")
    mean_pos = Fraction(sum(r.positive for r in results), len(results))
    mean_neg = Fraction(sum(r.negative for r in results), len(results))
    return float(mean_pos), float(mean_neg)


def format_degrees(value: float | Fraction) -> str:
    """Two-decimal degree rendering, ties away from zero: 63.41 -> "63.41°"."""
    exact = _round_half_away(Fraction(value), 2)
    sign = "-" if exact < 0 else ""
    quotient, remainder = divmod(abs(exact) * 100, 100)
    return f"{sign}{quotient.numerator}.{str(remainder.numerator).rjust(2, '0')}°"


def save_curve_csv(curve: AccuracyCurve, path: Path | str) -> None:
    """Write the canonical angle_deg,accuracy CSV (37 rows)."""
    lines = ["angle_deg,accuracy"]
    for angle, acc in zip(curve.angles, curve.accuracies):
        lines.append(f"{angle},{acc!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_curve_csv(path: Path | str) -> AccuracyCurve:
    """Read an angle_deg,accuracy CSV covering the full grid."""
    path = Path(path)
    values: dict[int, float] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) != {"angle_deg", "accuracy"}:
            raise ValueError(f"{path}: expected header angle_deg,accuracy")
        for row_num, row in enumerate(reader, start=2):
            try:
                angle = int(row["angle_deg"])
                accuracy = float(row["accuracy"])
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}: row {row_num}: {exc}") from exc
            if angle in values:
                raise ValueError(f"{path}: row {row_num}: duplicate angle {angle}")
            values[angle] = accuracy
    return AccuracyCurve.from_mapping(values)
