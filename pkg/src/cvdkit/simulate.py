"""Graded red-green deficit simulation.

The deficit is modeled in LMS space by a matrix that interpolates
linearly between the identity (no deficit) and the dichromat projection,
one fuzzy degree per anomaly. The full pipeline is
bytes -> floats -> LMS -> deficit -> RGB -> bytes, quantizing only at
the very end.

The hybrid matrix is defined on all of [0,1]^2; combined degrees above
0.5 for both anomalies produce perceptually questionable output but are
accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Image8, ImageF, apply_matrix, lms_to_rgb, rgb_to_lms, to_bytes, to_float


class DegreeRangeError(ValueError):
    """A fuzzy degree fell outside [0, 1]."""


def check_degree(name: str, value) -> float:
    v = float(value)
    if math.isnan(v) or not 0.0 <= v <= 1.0:
        raise DegreeRangeError(f"{name} must be in [0, 1], got {value!r}")
    return v


@dataclass(frozen=True)
class SimSpec:
    """Degrees of the two simulated anomalies."""

    alpha_p: float = 0.0
    alpha_d: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha_p", check_degree("alpha_p", self.alpha_p))
        object.__setattr__(self, "alpha_d", check_degree("alpha_d", self.alpha_d))


def protanomaly_matrix(alpha_p: float) -> np.ndarray:
    a = check_degree("alpha_p", alpha_p)
    return np.array(
        [
            [1.0 - a, 2.0234 * a, -2.5258 * a],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
        ]
    )


def deuteranomaly_matrix(alpha_d: float) -> np.ndarray:
    a = check_degree("alpha_d", alpha_d)
    return np.array(
        [
            [1.0, 0.0, 0.0],
            [0.4942 * a, 1.0 - a, 1.2483 * a],
            [0.0, 0.0, 1.0],
        ]
    )


def hybrid_matrix(spec: SimSpec) -> np.ndarray:
    """Both anomalies in one matrix; rows reduce to the pure models when
    the other degree is zero."""
    ap, ad = spec.alpha_p, spec.alpha_d
    return np.array(
        [
            [1.0 - ap, 2.0234 * ap, -2.5258 * ap],
            [0.4942 * ad, 1.0 - ad, 1.2483 * ad],
            [0.0, 0.0, 1.0],
        ]
    )


def simulate_float(img: ImageF, spec: SimSpec) -> ImageF:
    """Simulation in float space, RGB in / RGB out, no quantization."""
    lms = rgb_to_lms(img)
    deficient = apply_matrix(lms, hybrid_matrix(spec))
    return lms_to_rgb(deficient)


def simulate(img: Image8, spec: SimSpec) -> Image8:
    return to_bytes(simulate_float(to_float(img), spec))
