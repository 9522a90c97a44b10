"""Accuracy-curve rendering.

Two output paths: a dependency-free SVG polyline chart with byte-stable
content (fixed two-decimal coordinates, no external assets), and PNG
report figures rendered with matplotlib's Agg canvas.
"""

from __future__ import annotations

from pathlib import Path

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .breakdown import AccuracyCurve, BreakdownConfig, BreakdownResult
from .metrics import AccuracyReport

__all__ = [
    "breakdown_chart_svg",
    "save_breakdown_chart_svg",
    "render_breakdown_figure",
    "render_group_accuracy_figure",
]

_WIDTH, _HEIGHT = 640, 420
_LEFT, _RIGHT, _TOP, _BOTTOM = 62, 18, 18, 48


def _x(angle: float) -> float:
    return _LEFT + (angle + 90.0) / 180.0 * (_WIDTH - _LEFT - _RIGHT)


def _y(accuracy: float) -> float:
    return _HEIGHT - _BOTTOM - accuracy * (_HEIGHT - _TOP - _BOTTOM)


def breakdown_chart_svg(
    curve: AccuracyCurve, result: BreakdownResult, cfg: BreakdownConfig | None = None
) -> str:
    """Self-contained accuracy-vs-angle chart.

    Draws the curve as a polyline, a dashed horizontal line at the
    accuracy floor, and a vertical marker at each breakdown point (dashed
    when the side never triggered and sits at +/-90).
    """
    cfg = cfg or BreakdownConfig()
    parts: list[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_WIDTH} {_HEIGHT}" '
        f'width="{_WIDTH}" height="{_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="#ffffff"/>',
    ]
    # frame and gridlines
    for angle in range(-90, 120, 30):
        gx = _x(angle)
        parts.append(
            f'<line x1="{gx:.2f}" y1="{_y(0.0):.2f}" x2="{gx:.2f}" y2="{_y(1.0):.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{gx:.2f}" y="{_HEIGHT - _BOTTOM + 18:.2f}" font-family="sans-serif" '
            f'font-size="12" fill="#333333" text-anchor="middle">{angle}</text>'
        )
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        gy = _y(tick)
        parts.append(
            f'<line x1="{_x(-90):.2f}" y1="{gy:.2f}" x2="{_x(90):.2f}" y2="{gy:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_LEFT - 8:.2f}" y="{gy + 4:.2f}" font-family="sans-serif" '
            f'font-size="12" fill="#333333" text-anchor="end">{tick:.2f}</text>'
        )
    # accuracy floor
    fy = _y(cfg.accuracy_floor)
    parts.append(
        f'<line x1="{_x(-90):.2f}" y1="{fy:.2f}" x2="{_x(90):.2f}" y2="{fy:.2f}" '
        f'stroke="#e08214" stroke-width="1.5" stroke-dasharray="6 4"/>'
    )
    parts.append(
        f'<text x="{_x(90) - 4:.2f}" y="{fy - 5:.2f}" font-family="sans-serif" font-size="11" '
        f'fill="#e08214" text-anchor="end">floor {cfg.accuracy_floor:.2f}</text>'
    )
    # breakdown markers
    for angle, triggered in (
        (result.positive, result.positive_triggered),
        (result.negative, result.negative_triggered),
    ):
        bx = _x(angle)
        dash = "" if triggered else ' stroke-dasharray="3 4"'
        parts.append(
            f'<line x1="{bx:.2f}" y1="{_y(0.0):.2f}" x2="{bx:.2f}" y2="{_y(1.0):.2f}" '
            f'stroke="#d62728" stroke-width="1.5"{dash}/>'
        )
        label = f"{angle}" if triggered else f"{angle} (none)"
        anchor = "start" if angle < 0 else "end"
        off = 4 if angle < 0 else -4
        parts.append(
            f'<text x="{bx + off:.2f}" y="{_y(1.0) + 12:.2f}" font-family="sans-serif" '
            f'font-size="11" fill="#d62728" text-anchor="{anchor}">{label}</text>'
        )
    # the curve itself
    points = " ".join(
        f"{_x(a):.2f},{_y(v):.2f}" for a, v in zip(curve.angles, curve.accuracies)
    )
    parts.append(
        f'<polyline points="{points}" fill="none" stroke="#1f77b4" stroke-width="2"/>'
    )
    # axes labels
    parts.append(
        f'<text x="{(_x(-90) + _x(90)) / 2:.2f}" y="{_HEIGHT - 10:.2f}" '
        f'font-family="sans-serif" font-size="13" fill="#000000" '
        f'text-anchor="middle">hand pose angle (degrees)</text>'
    )
    parts.append(
        f'<text x="16" y="{(_y(0.0) + _y(1.0)) / 2:.2f}" font-family="sans-serif" '
        f'font-size="13" fill="#000000" text-anchor="middle" '
        f'transform="rotate(-90 16 {(_y(0.0) + _y(1.0)) / 2:.2f})">top-1 accuracy</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def save_breakdown_chart_svg(
    path: Path | str,
    curve: AccuracyCurve,
    result: BreakdownResult,
    cfg: BreakdownConfig | None = None,
) -> None:
    Path(path).write_text(breakdown_chart_svg(curve, result, cfg), encoding="utf-8")


def render_breakdown_figure(
    path: Path | str,
    curve: AccuracyCurve,
    result: BreakdownResult,
    cfg: BreakdownConfig | None = None,
) -> None:
    """PNG report figure of the curve with floor and breakdown markers."""
    cfg = cfg or BreakdownConfig()
    fig = Figure(figsize=(6.4, 4.2), dpi=100)
    FigureCanvasAgg(fig)
    ax = fig.subplots()
    ax.plot(curve.angles, curve.accuracies, marker="o", markersize=3, color="#1f77b4")
    ax.axhline(cfg.accuracy_floor, color="#e08214", linestyle="--", linewidth=1.2)
    for angle, triggered in (
        (result.positive, result.positive_triggered),
        (result.negative, result.negative_triggered),
    ):
        ax.axvline(angle, color="#d62728", linestyle="-" if triggered else ":", linewidth=1.2)
    ax.set_xlim(-90, 90)
    ax.set_ylim(0.0, 1.05)
    ax.set_xticks(range(-90, 120, 30))
    ax.set_xlabel("hand pose angle (degrees)")
    ax.set_ylabel("top-1 accuracy")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(Path(path), format="png")


def render_group_accuracy_figure(path: Path | str, report: AccuracyReport) -> None:
    """PNG bar chart of per-group accuracy with the overall value marked."""
    fig = Figure(figsize=(6.4, 4.2), dpi=100)
    FigureCanvasAgg(fig)
    ax = fig.subplots()
    keys = list(report.by_group)
    values = [report.by_group[k].accuracy for k in keys]
    ax.bar(range(len(keys)), values, color="#1f77b4")
    ax.axhline(report.overall, color="#e08214", linestyle="--", linewidth=1.2)
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels(keys, rotation=45, ha="right", fontsize=8)
    ax.set_ylim(0.0, 1.05)
    ax.set_xlabel(f"group ({report.group_key})")
    ax.set_ylabel("top-1 accuracy")
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(Path(path), format="png")
