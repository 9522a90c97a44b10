"""Brightness-based comparison augmentations: constant reduction and uniform jitter."""

from __future__ import annotations

from dataclasses import dataclass

from .imaging import ImageBuffer, _scale_half_away

__all__ = ["BrightnessJitterRange", "reduce_brightness", "jitter_brightness"]


@dataclass(frozen=True)
class BrightnessJitterRange:
    """Inclusive factor range for brightness jitter; 0 < low <= high <= 1."""

    low: float
    high: float

    def __post_init__(self) -> None:
        if not 0.0 < self.low <= self.high <= 1.0:
            raise ValueError(
                f"jitter range must satisfy 0 < low <= high <= 1, got [{self.low}, {self.high}]"
            )


def reduce_brightness(img: ImageBuffer, factor: float) -> ImageBuffer:
    """Scale every channel by ``factor``, rounding half away from zero."""
    if not 0.0 < factor <= 1.0:
        raise ValueError(f"brightness factor must lie in (0, 1], got {factor}")
    return ImageBuffer(_scale_half_away(img.pixels, factor))


def jitter_brightness(img: ImageBuffer, jitter: BrightnessJitterRange, draw: float) -> ImageBuffer:
    """Darken by ``low + draw * (high - low)``; the caller supplies the deviate."""
    if not 0.0 <= draw < 1.0:
        raise ValueError(f"draw must lie in [0, 1), got {draw}")
    factor = jitter.low + draw * (jitter.high - jitter.low)
    return reduce_brightness(img, factor)
