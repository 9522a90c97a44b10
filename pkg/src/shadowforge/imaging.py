"""8-bit RGB image buffers plus the codec and flip primitives shared by every augmentation.

Only one pixel format exists internally: interleaved RGB, one byte per
channel. Grayscale sources are expanded on decode and alpha sources are
composited over opaque black, so downstream operations never see anything
but ``(height, width, 3)`` uint8 data.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

__all__ = [
    "DecodeError",
    "UnsupportedFormatError",
    "ImageBuffer",
    "decode_image",
    "encode_image",
    "horizontal_flip",
]


class DecodeError(ValueError):
    """The byte stream could not be decoded as an image."""


class UnsupportedFormatError(DecodeError):
    """The stream decoded to a format other than PNG or JPEG."""


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """Owned, immutable 8-bit RGB raster.

    ``pixels`` is a read-only ``(height, width, 3)`` uint8 array; the
    constructor copies its input so instances behave as values and can be
    shared freely between workers.
    """

    pixels: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.pixels)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"expected a (height, width, 3) array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if arr.dtype != np.uint8:
            if not np.issubdtype(arr.dtype, np.integer):
                raise ValueError(f"channel values must be integers, got dtype {arr.dtype}")
            if arr.min() < 0 or arr.max() > 255:
                raise ValueError("channel values must lie in [0, 255]")
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    def pixel(self, x: int, y: int) -> tuple[int, int, int]:
        """Channel triple at column ``x``, row ``y``."""
        r, g, b = self.pixels[y, x]
        return int(r), int(g), int(b)

    def to_array(self) -> np.ndarray:
        """Writable copy of the pixel data."""
        return self.pixels.copy()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )

    __hash__ = None  # type: ignore[assignment]


def decode_image(data: bytes) -> ImageBuffer:
    """Decode a PNG or JPEG stream into an RGB buffer.

    Any alpha plane is composited over opaque black before being dropped;
    grayscale and palette images are expanded to RGB.

    Raises :class:`DecodeError` for malformed streams and
    :class:`UnsupportedFormatError` for well-formed streams in any other
    format.
    """
    if not data:
        raise DecodeError("empty stream (0 bytes)")
    try:
        img = Image.open(io.BytesIO(data))
    except UnidentifiedImageError as exc:
        raise DecodeError(f"cannot identify image data: {exc}") from exc
    except OSError as exc:  # signature matched but the header is mangled
        raise DecodeError(f"malformed image header: {exc}") from exc
    if img.format not in ("PNG", "JPEG"):
        raise UnsupportedFormatError(
            f"unsupported format {img.format!r}: only PNG and JPEG are accepted"
        )
    try:
        img.load()
    except OSError as exc:  # truncated or corrupt payload past the header
        raise DecodeError(f"cannot decode {img.format} stream: {exc}") from exc
    rgba = img.convert("RGBA")
    black = Image.new("RGBA", rgba.size, (0, 0, 0, 255))
    rgb = Image.alpha_composite(black, rgba).convert("RGB")
    return ImageBuffer(np.asarray(rgb))


def encode_image(img: ImageBuffer, fmt: str = "png", *, quality: int = 90) -> bytes:
    """Encode to PNG (lossless) or JPEG (lossy, baseline) bytes."""
    pil = Image.fromarray(img.pixels)
    buf = io.BytesIO()
    key = fmt.lower()
    if key == "png":
        pil.save(buf, format="PNG")
    elif key in ("jpeg", "jpg"):
        if not 1 <= quality <= 100:
            raise ValueError(f"jpeg quality must lie in [1, 100], got {quality}")
        pil.save(buf, format="JPEG", quality=quality)
    else:
        raise ValueError(f"unsupported format {fmt!r}: use 'png' or 'jpeg'")
    return buf.getvalue()


def horizontal_flip(img: ImageBuffer) -> ImageBuffer:
    """Mirror left-right: output (x, y) = input (width-1-x, y)."""
    return ImageBuffer(img.pixels[:, ::-1])


def _scale_half_away(pixels: np.ndarray, factor: float) -> np.ndarray:
    """Per-channel c -> round-half-away-from-zero(c * factor), clamped to [0, 255].

    Shared by the shadow and brightness ops so both sides of their
    equivalence contract use one rounding definition. Channels are
    non-negative, so half-away-from-zero reduces to floor(c*f + 0.5).
    """
    scaled = np.floor(pixels.astype(np.float64) * factor + 0.5)
    return np.clip(scaled, 0.0, 255.0).astype(np.uint8)
