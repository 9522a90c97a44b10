"""Shared test oracles and fixture builders.

The oracles are deliberately naive restatements of the contracts they
check: per-pixel Python loops and literal rule scans, kept structurally
independent from the vectorized production code.
"""

from __future__ import annotations

import csv
import hashlib
import math
import random
from pathlib import Path

import numpy as np

from shadowforge import ImageBuffer, encode_image


# --------------------------------------------------------------------------
# rasterizer oracle


def point_in_quad(px: float, py: float, vertices) -> bool:
    """Even-odd membership for one point, on-edge counted inside.

    Uses the same arithmetic expression order as the production rasterizer
    so that agreement can be asserted bit-exactly, but evaluates scalars in
    a plain loop.
    """
    crossings = 0
    for i in range(4):
        ax, ay = vertices[i]
        bx, by = vertices[(i + 1) % 4]
        cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
        if (
            cross == 0.0
            and min(ax, bx) <= px <= max(ax, bx)
            and min(ay, by) <= py <= max(ay, by)
        ):
            return True
        if ay != by and ((ay > py) != (by > py)):
            x_hit = ax + (py - ay) / (by - ay) * (bx - ax)
            if px < x_hit:
                crossings += 1
    return crossings % 2 == 1


def rasterize_oracle(vertices, width: int, height: int) -> np.ndarray:
    """Brute-force per-pixel mask for a 4-vertex polygon."""
    shoelace = 0.0
    for i in range(4):
        ax, ay = vertices[i]
        bx, by = vertices[(i + 1) % 4]
        shoelace += ax * by - bx * ay
    mask = np.zeros((height, width), dtype=bool)
    if shoelace == 0.0:
        return mask
    for y in range(height):
        py = (y + 0.5) / height
        for x in range(width):
            px = (x + 0.5) / width
            mask[y, x] = point_in_quad(px, py, vertices)
    return mask


def _orient(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _segments_cross(p, q, r, s) -> bool:
    return (
        _orient(p, q, r) * _orient(p, q, s) < 0
        and _orient(r, s, p) * _orient(r, s, q) < 0
    )


def random_simple_quad(rng: random.Random):
    """Four random points ordered by angle about their centroid.

    Angle ordering yields a non-self-intersecting quad for points in
    general position; degenerate or crossing draws are resampled.
    """
    while True:
        pts = [(rng.uniform(0.02, 0.98), rng.uniform(0.02, 0.98)) for _ in range(4)]
        cx = sum(p[0] for p in pts) / 4
        cy = sum(p[1] for p in pts) / 4
        pts.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
        area2 = 0.0
        for i in range(4):
            ax, ay = pts[i]
            bx, by = pts[(i + 1) % 4]
            area2 += ax * by - bx * ay
        if area2 == 0.0:
            continue
        if _segments_cross(pts[0], pts[1], pts[2], pts[3]) or _segments_cross(
            pts[1], pts[2], pts[3], pts[0]
        ):
            continue
        return tuple(pts)


def random_lattice_quad(rng: random.Random, width: int, height: int):
    """A quad whose vertices sit exactly on pixel centers.

    Edges then pass straight through pixel centers, stressing the
    on-edge and ray-tie paths of the rasterizer.
    """
    while True:
        pts = [
            (
                (2 * rng.randrange(width) + 1) / (2 * width),
                (2 * rng.randrange(height) + 1) / (2 * height),
            )
            for _ in range(4)
        ]
        if len(set(pts)) < 4:
            continue
        cx = sum(p[0] for p in pts) / 4
        cy = sum(p[1] for p in pts) / 4
        pts.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
        area2 = 0.0
        for i in range(4):
            ax, ay = pts[i]
            bx, by = pts[(i + 1) % 4]
            area2 += ax * by - bx * ay
        if area2 == 0.0:
            continue
        if _segments_cross(pts[0], pts[1], pts[2], pts[3]) or _segments_cross(
            pts[1], pts[2], pts[3], pts[0]
        ):
            continue
        return tuple(pts)


# --------------------------------------------------------------------------
# breakdown rule oracle


def scan_breakdown_oracle(values: dict[int, float], floor: float, drop: float):
    """Literal restatement of the breakdown rule over an angle->accuracy map.

    Returns (positive, negative, positive_triggered, negative_triggered).
    """
    if values[0] < floor:
        return 0, 0, True, True
    positive, pos_hit = 90, False
    for theta in range(5, 95, 5):
        if values[theta] < floor or values[theta - 5] - values[theta] > drop:
            positive, pos_hit = theta, True
            break
    negative, neg_hit = -90, False
    for theta in range(-5, -95, -5):
        if values[theta] < floor or values[theta + 5] - values[theta] > drop:
            negative, neg_hit = theta, True
            break
    return positive, negative, pos_hit, neg_hit


def largest_step_within(value: float, drop: float) -> float:
    """Largest float below ``value`` whose gap from it does not exceed ``drop``.

    value - (value - drop) can overshoot drop by an ulp in floats; this nudges
    the result up until the realized gap is representable as <= drop.
    """
    nxt = value - drop
    while value - nxt > drop:
        nxt = math.nextafter(nxt, math.inf)
    return nxt


# --------------------------------------------------------------------------
# fixture builders


def random_pixels(seed: int, width: int, height: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)


def write_png(path: Path, pixels: np.ndarray) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_image(ImageBuffer(pixels), "png"))


def build_class_tree(
    root: Path, classes: int, per_class: int, side: int = 8, seed: int = 0
) -> list[str]:
    """Write a <root>/<class>/<image>.png tree; returns the relative paths."""
    rels = []
    for c in range(classes):
        for i in range(per_class):
            rel = f"class{c:02d}/img{i:04d}.png"
            write_png(root / rel, random_pixels(seed + c * per_class + i, side, side))
            rels.append(rel)
    return rels


def tree_digest(root: Path, skip: tuple[str, ...] = ()) -> str:
    """Content hash over every file under root, keyed by relative path."""
    digest = hashlib.sha256()
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        rel = path.relative_to(root).as_posix()
        if rel in skip:
            continue
        digest.update(rel.encode("utf-8"))
        digest.update(b"\0")
        digest.update(hashlib.sha256(path.read_bytes()).digest())
    return digest.hexdigest()


def write_prediction_rows(path: Path, rows, header) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def accuracy_fixture_rows(prefix: str, total: int, correct: int) -> list[tuple[str, str, str]]:
    """Rows realizing exactly correct/total accuracy on a single label."""
    return [
        (f"{prefix}{i:04d}", "x", "x" if i < correct else "y")
        for i in range(total)
    ]
