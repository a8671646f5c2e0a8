"""Raster types, RGB/LMS conversion and the shared quantization policy.

All pixel math runs on double-precision floats normalized to [0, 1];
images are quantized back to bytes exactly once, at the end of a
pipeline. Intermediate values are allowed to leave [0, 1] (the deficit
matrices have negative coefficients) and are clamped only at
quantization time.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

ColorSpace = Literal["RGB", "LMS"]

#: Cone-response matrix: left-multiplies an (r, g, b) column vector.
RGB_TO_LMS = np.array(
    [
        [17.8824, 43.5161, 4.1194],
        [3.4557, 27.1554, 3.8671],
        [0.0300, 0.1843, 1.4671],
    ]
)
RGB_TO_LMS.setflags(write=False)


class SpaceTagError(ValueError):
    """An operation received an image tagged with the wrong color space."""


class SingularMatrixError(ValueError):
    """Matrix inversion was requested for a numerically singular matrix."""

    def __init__(self, determinant: float):
        super().__init__(f"matrix is numerically singular (det = {determinant:.6e})")
        self.determinant = determinant


def _frozen_pixels(data, dtype) -> np.ndarray:
    px = np.array(data, dtype=dtype, copy=True)
    if px.ndim != 3 or px.shape[2] != 3:
        raise ValueError(f"expected a (height, width, 3) pixel array, got shape {px.shape}")
    if px.shape[0] < 1 or px.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    px.setflags(write=False)
    return px


@dataclass(frozen=True)
class Image8:
    """8-bit-per-channel RGB raster, row-major (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        src = np.asarray(self.pixels)
        if src.dtype != np.uint8:
            raise ValueError(f"Image8 requires uint8 pixels, got {src.dtype}")
        object.__setattr__(self, "pixels", _frozen_pixels(src, np.uint8))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class ImageF:
    """Float raster with a color-space tag.

    Values are nominally in [0, 1] but may exceed that range between a
    transform and the final quantization (LMS values are unbounded above).
    """

    pixels: np.ndarray
    space: ColorSpace = "RGB"

    def __post_init__(self):
        if self.space not in ("RGB", "LMS"):
            raise ValueError(f"unknown color space tag {self.space!r}")
        object.__setattr__(self, "pixels", _frozen_pixels(self.pixels, np.float64))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def as_matrix3(m) -> np.ndarray:
    """Validate and return a 3x3 float64 matrix."""
    a = np.asarray(m, dtype=np.float64)
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    return a


def invert3(m) -> np.ndarray:
    """Invert a 3x3 matrix, rejecting near-singular inputs."""
    a = as_matrix3(m)
    det = float(np.linalg.det(a))
    if abs(det) <= 1e-12:
        raise SingularMatrixError(det)
    return np.linalg.inv(a)


# Computed inverse, not the rounded 4-decimal matrix sometimes quoted for
# this conversion: the rounded one breaks the exact round-trip identity.
LMS_TO_RGB = invert3(RGB_TO_LMS)
LMS_TO_RGB.setflags(write=False)


def apply_matrix(img: ImageF, m, space: ColorSpace | None = None) -> ImageF:
    """Left-multiply every pixel by a 3x3 matrix.

    The space tag is preserved unless `space` overrides it. No clamping.
    """
    a = as_matrix3(m)
    out = img.pixels @ a.T
    return ImageF(out, space if space is not None else img.space)


def rgb_to_lms(img: ImageF) -> ImageF:
    if img.space != "RGB":
        raise SpaceTagError(f"rgb_to_lms requires an RGB-tagged image, got {img.space}")
    return apply_matrix(img, RGB_TO_LMS, space="LMS")


def lms_to_rgb(img: ImageF) -> ImageF:
    if img.space != "LMS":
        raise SpaceTagError(f"lms_to_rgb requires an LMS-tagged image, got {img.space}")
    return apply_matrix(img, LMS_TO_RGB, space="RGB")


def quantize_plane(values: np.ndarray) -> np.ndarray:
    """Clamp floats to [0, 1] and round half-up onto the 0..255 byte scale."""
    clipped = np.clip(values, 0.0, 1.0)
    return np.floor(clipped * 255.0 + 0.5).astype(np.uint8)


def to_float(img: Image8) -> ImageF:
    return ImageF(img.pixels.astype(np.float64) / 255.0, "RGB")


def to_bytes(img: ImageF) -> Image8:
    if img.space != "RGB":
        raise SpaceTagError(f"to_bytes requires an RGB-tagged image, got {img.space}")
    return Image8(quantize_plane(img.pixels))


def load_image(path: str | Path) -> Image8:
    """Read a PNG/BMP file as 3-channel bytes; an alpha channel is discarded."""
    with PILImage.open(path) as im:
        rgb = im.convert("RGB")
        return Image8(np.asarray(rgb, dtype=np.uint8))


def save_image(img: Image8, path: str | Path) -> None:
    PILImage.fromarray(img.pixels, "RGB").save(path)


def decode_image(data: bytes) -> Image8:
    """Decode in-memory PNG/BMP bytes; raises ValueError on undecodable data."""
    try:
        with PILImage.open(io.BytesIO(data)) as im:
            rgb = im.convert("RGB")
            return Image8(np.asarray(rgb, dtype=np.uint8))
    except UnidentifiedImageError as exc:
        raise ValueError("payload is not a decodable image") from exc


def encode_png(img: Image8) -> bytes:
    buf = io.BytesIO()
    PILImage.fromarray(img.pixels, "RGB").save(buf, format="PNG")
    return buf.getvalue()
