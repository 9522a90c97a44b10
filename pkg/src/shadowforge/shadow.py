"""Polygonal shadow synthesis.

A shadow is a 4-vertex region in normalized image coordinates ((0,0) =
top-left, (1,1) = bottom-right) plus a multiplicative shadow factor in
(0,1]. Rasterization uses pixel-center containment under the even-odd
rule: pixel (x, y) is inside iff ((x+0.5)/width, (y+0.5)/height) is inside
the polygon, with points exactly on an edge counting as inside. There is
no anti-aliasing; shadow edges are hard by design.

The pole-occluder model maps a physical parameterization (opacity, pole
width, placement, rotation) onto such a region: an infinite band around a
center line, clipped to the unit square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .imaging import ImageBuffer, _scale_half_away

__all__ = [
    "ShadowPolygon",
    "ShadowSpec",
    "PoleShadowModel",
    "RegionMask",
    "rasterize_polygon",
    "apply_shadow",
    "preset_polygons",
    "pole_to_polygon",
    "apply_pole_shadow",
]

_SQRT2 = math.sqrt(2.0)

Point = tuple[float, float]


def _clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else (1.0 if v > 1.0 else float(v))


def _cross(o: Point, a: Point, b: Point) -> float:
    """z-component of (a - o) x (b - o)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _proper_crossing(p: Point, q: Point, r: Point, s: Point) -> bool:
    """True iff segments pq and rs cross at a point interior to both.

    Shared endpoints and collinear overlap do not count, so degenerate
    (zero-area) quads pass while bow-ties are caught.
    """
    return (
        _cross(p, q, r) * _cross(p, q, s) < 0.0
        and _cross(r, s, p) * _cross(r, s, q) < 0.0
    )


@dataclass(frozen=True)
class ShadowPolygon:
    """Exactly four vertices in normalized coordinates.

    Components are clamped into [0, 1] on construction. Properly
    self-intersecting (bow-tie) quads are rejected; degenerate zero-area
    quads are legal and rasterize to an empty mask.
    """

    vertices: tuple[Point, Point, Point, Point]

    def __post_init__(self) -> None:
        if len(self.vertices) != 4:
            raise ValueError(f"polygon needs exactly 4 vertices, got {len(self.vertices)}")
        verts = tuple((_clamp01(float(x)), _clamp01(float(y))) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if _proper_crossing(verts[0], verts[1], verts[2], verts[3]) or _proper_crossing(
            verts[1], verts[2], verts[3], verts[0]
        ):
            raise ValueError("polygon is self-intersecting")

    def area(self) -> float:
        """Absolute shoelace area in normalized units."""
        s = 0.0
        for i in range(4):
            ax, ay = self.vertices[i]
            bx, by = self.vertices[(i + 1) % 4]
            s += ax * by - bx * ay
        return abs(s) / 2.0


@dataclass(frozen=True)
class ShadowSpec:
    """A shadow region plus its multiplicative darkening factor."""

    polygon: ShadowPolygon
    shadow_factor: float

    def __post_init__(self) -> None:
        if not 0.0 < self.shadow_factor <= 1.0:
            raise ValueError(f"shadow_factor must lie in (0, 1], got {self.shadow_factor}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "vertices": [[x, y] for x, y in self.polygon.vertices],
            "shadow_factor": self.shadow_factor,
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "ShadowSpec":
        try:
            vertices = tuple((float(x), float(y)) for x, y in payload["vertices"])
            factor = float(payload["shadow_factor"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad shadow spec: {exc}") from exc
        return cls(ShadowPolygon(vertices), factor)


@dataclass(frozen=True)
class PoleShadowModel:
    """Parametric occluder casting a straight shadow band.

    alpha: occluder opacity in (0, 1); the band transmits 1 - alpha.
    width_level: band half-width as a fraction of the image diagonal, in (0, 0.5].
    rotation_deg: band axis angle in degrees, measured from image vertical.
    translation: signed offset of the band center in [-1, 1]; the center
        line passes through (0.5 + translation/2, 0.5).
    """

    alpha: float
    width_level: float
    rotation_deg: float = 0.0
    translation: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0.0 < self.width_level <= 0.5:
            raise ValueError(f"width_level must lie in (0, 0.5], got {self.width_level}")
        if not -1.0 <= self.translation <= 1.0:
            raise ValueError(f"translation must lie in [-1, 1], got {self.translation}")

    @property
    def shadow_factor(self) -> float:
        return 1.0 - self.alpha

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "width_level": self.width_level,
            "rotation_deg": self.rotation_deg,
            "translation": self.translation,
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "PoleShadowModel":
        try:
            return cls(
                alpha=float(payload["alpha"]),
                width_level=float(payload["width_level"]),
                rotation_deg=float(payload.get("rotation_deg", 0.0)),
                translation=float(payload.get("translation", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad pole shadow model: {exc}") from exc


@dataclass(frozen=True, eq=False)
class RegionMask:
    """Boolean per-pixel mask; true means inside the shadow region."""

    width: int
    height: int
    bits: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.bits)
        if arr.shape != (self.height, self.width) or arr.dtype != np.bool_:
            raise ValueError(
                f"mask bits must be a ({self.height}, {self.width}) bool array, "
                f"got {arr.dtype} {arr.shape}"
            )
        arr = np.array(arr, copy=True)
        arr.flags.writeable = False
        object.__setattr__(self, "bits", arr)

    def count(self) -> int:
        """Number of pixels inside the region."""
        return int(np.count_nonzero(self.bits))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegionMask):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and bool(np.array_equal(self.bits, other.bits))
        )

    __hash__ = None  # type: ignore[assignment]


def rasterize_polygon(polygon: ShadowPolygon, width: int, height: int) -> RegionMask:
    """Pixel-center containment mask for a polygon.

    Even-odd rule; a center exactly on an edge is inside. Zero-area
    polygons yield an empty mask. The arithmetic is plain IEEE double with
    a fixed expression order, so the result is bit-reproducible and can be
    checked against a per-pixel brute-force oracle.
    """
    if width < 1 or height < 1:
        raise ValueError(f"raster dimensions must be >= 1, got {width}x{height}")
    if polygon.area() == 0.0:
        return RegionMask(width, height, np.zeros((height, width), dtype=bool))
    px = ((np.arange(width, dtype=np.float64) + 0.5) / width)[np.newaxis, :]
    py = ((np.arange(height, dtype=np.float64) + 0.5) / height)[:, np.newaxis]
    on_edge = np.zeros((height, width), dtype=bool)
    crossings = np.zeros((height, width), dtype=np.int64)
    verts = polygon.vertices
    for i in range(4):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % 4]
        cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
        on_edge |= (
            (cross == 0.0)
            & (px >= min(ax, bx))
            & (px <= max(ax, bx))
            & (py >= min(ay, by))
            & (py <= max(ay, by))
        )
        if ay != by:
            straddles = (ay > py) != (by > py)
            x_hit = ax + (py - ay) / (by - ay) * (bx - ax)
            crossings += straddles & (px < x_hit)
    return RegionMask(width, height, on_edge | (crossings % 2 == 1))


def apply_shadow(img: ImageBuffer, spec: ShadowSpec) -> ImageBuffer:
    """Darken the pixels inside ``spec.polygon`` by ``spec.shadow_factor``.

    Inside the region each channel becomes round-half-away-from-zero
    (c * shadow_factor) clamped to [0, 255]; outside pixels are returned
    bit-identical.
    """
    mask = rasterize_polygon(spec.polygon, img.width, img.height)
    out = img.to_array()
    scaled = _scale_half_away(img.pixels, spec.shadow_factor)
    out[mask.bits] = scaled[mask.bits]
    return ImageBuffer(out)


# The four frozen shadow regions (normalized, clockwise): a left band, a
# bottom band, and two diagonal placements. These constants are part of
# the external contract.
_PRESET_VERTICES: tuple[tuple[Point, Point, Point, Point], ...] = (
    ((0.00, 0.00), (0.45, 0.00), (0.45, 1.00), (0.00, 1.00)),
    ((0.00, 0.55), (1.00, 0.55), (1.00, 1.00), (0.00, 1.00)),
    ((0.00, 0.00), (1.00, 0.00), (1.00, 0.35), (0.00, 0.75)),
    ((0.00, 0.25), (1.00, 0.65), (1.00, 1.00), (0.00, 1.00)),
)


def preset_polygons() -> list[ShadowPolygon]:
    """The four frozen shadow regions, in their documented order."""
    return [ShadowPolygon(v) for v in _PRESET_VERTICES]


def _axis_from_vertical(rotation_deg: float) -> Point:
    """Unit direction of the band axis, ``rotation_deg`` away from vertical.

    Cardinal angles snap to exact axes so axis-aligned bands stay free of
    trigonometric residue (rotation 90 must transpose rotation 0 exactly).
    """
    k = rotation_deg % 360.0
    if k == 0.0:
        return (0.0, 1.0)
    if k == 90.0:
        return (1.0, 0.0)
    if k == 180.0:
        return (0.0, -1.0)
    if k == 270.0:
        return (-1.0, 0.0)
    theta = math.radians(rotation_deg)
    return (math.sin(theta), math.cos(theta))


def _clip_line_to_unit_square(
    cx: float, cy: float, dx: float, dy: float
) -> tuple[float, float] | None:
    """Parameter span of {(cx, cy) + t (dx, dy)} inside the unit square.

    Liang-Barsky against both coordinate slabs. Returns None when the
    line misses the square or only touches it at a point.
    """
    t0, t1 = -4.0, 4.0  # generously covers the square from any start point
    for direction, start in ((dx, cx), (dy, cy)):
        if direction == 0.0:
            if start < 0.0 or start > 1.0:
                return None
            continue
        ta = (0.0 - start) / direction
        tb = (1.0 - start) / direction
        lo, hi = (ta, tb) if ta <= tb else (tb, ta)
        t0 = max(t0, lo)
        t1 = min(t1, hi)
    if not t0 < t1:
        return None
    return t0, t1


def pole_to_polygon(model: PoleShadowModel) -> ShadowSpec:
    """Project a pole occluder onto the image plane as a 4-corner shadow band.

    The band is {p : distance(p, center line) <= width_level * sqrt(2)}
    (width levels are fractions of the image diagonal, which has length
    sqrt(2) in unit-square coordinates). Its center line runs through
    (0.5 + translation/2, 0.5) at ``rotation_deg`` from vertical. The four
    corners are obtained by clipping the center line to the unit square,
    offsetting the clipped segment by the half-width on both sides, and
    clamping the result back into the square; a band that misses the
    square degenerates to a zero-area polygon (a no-op shadow).
    """
    dx, dy = _axis_from_vertical(model.rotation_deg)
    cx, cy = 0.5 + 0.5 * model.translation, 0.5
    half_width = model.width_level * _SQRT2
    span = _clip_line_to_unit_square(cx, cy, dx, dy)
    if span is None:
        corner = (_clamp01(cx), _clamp01(cy))
        return ShadowSpec(ShadowPolygon((corner,) * 4), 1.0 - model.alpha)
    t0, t1 = span
    ax, ay = cx + t0 * dx, cy + t0 * dy
    bx, by = cx + t1 * dx, cy + t1 * dy
    nx, ny = dy, -dx  # unit normal of the band axis
    polygon = ShadowPolygon(
        (
            (ax - half_width * nx, ay - half_width * ny),
            (bx - half_width * nx, by - half_width * ny),
            (bx + half_width * nx, by + half_width * ny),
            (ax + half_width * nx, ay + half_width * ny),
        )
    )
    return ShadowSpec(polygon, 1.0 - model.alpha)


def apply_pole_shadow(img: ImageBuffer, model: PoleShadowModel) -> ImageBuffer:
    """Equivalent to ``apply_shadow(img, pole_to_polygon(model))``."""
    return apply_shadow(img, pole_to_polygon(model))
