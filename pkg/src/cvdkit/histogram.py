"""Per-channel histogram and the plain CDF histogram equalizer.

The mapping is s(v) = round(255 * CDF(v)) with half-up rounding, no
cdf-min renormalization. A constant plane therefore maps to 255; that
artifact is accepted.
"""

from __future__ import annotations

import numpy as np


def histogram(plane: np.ndarray) -> np.ndarray:
    """Counts per intensity level of an 8-bit plane, as a 256-vector."""
    p = np.asarray(plane)
    if p.size == 0:
        raise ValueError("channel plane is empty")
    if p.dtype != np.uint8:
        raise ValueError(f"expected a uint8 plane, got {p.dtype}")
    return np.bincount(p.ravel(), minlength=256)


def equalization_lut(plane: np.ndarray) -> np.ndarray:
    """The monotone level mapping induced by the plane's CDF."""
    bins = histogram(plane)
    cdf = np.cumsum(bins, dtype=np.float64) / np.asarray(plane).size
    return np.floor(255.0 * cdf + 0.5).astype(np.uint8)


def equalize(plane: np.ndarray) -> np.ndarray:
    """Equalize one 8-bit plane."""
    return equalization_lut(plane)[plane]
