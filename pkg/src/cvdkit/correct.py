"""Adaptive correction filters.

Method A builds absolute-case corrections for the protan and deuteran
cases (band averaging, optional equalization of the modified bands) and
blends them with the original image using weights derived from fuzzy
rules over the test profile.

Method B applies a single adaptive transform matrix that redistributes
the deficient band into the other two; it is row-stochastic for all
degree pairs, so in RGB it can never leave [0, 1] and always fixes the
gray axis.

Both methods run in RGB or LMS. The LMS variant of Method A rescales
each cone plane to [0, 1] by its theoretical maximum before the band
formulas so that the equalizer stays well-defined, and undoes the
rescale afterwards.
"""

from __future__ import annotations

import datetime as _dt
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

from .core import (
    RGB_TO_LMS,
    Image8,
    ImageF,
    apply_matrix,
    lms_to_rgb,
    quantize_plane,
    rgb_to_lms,
    to_bytes,
    to_float,
)
from .histogram import equalize
from .simulate import check_degree

#: Theoretical maximum of each LMS plane for unit RGB input (matrix row sums).
LMS_PLANE_MAX = np.asarray(RGB_TO_LMS).sum(axis=1)
LMS_PLANE_MAX.setflags(write=False)


@dataclass(frozen=True)
class FuzzyProfile:
    """The four membership degrees produced by the plate test.

    The degrees are independent memberships; nothing forces them to sum
    to one.
    """

    beta: float
    alpha_p: float
    alpha_d: float
    alpha_n: float

    def __post_init__(self):
        for name in ("beta", "alpha_p", "alpha_d", "alpha_n"):
            object.__setattr__(self, name, check_degree(name, getattr(self, name)))


@dataclass(frozen=True)
class CorrectionOptions:
    method: Literal["a", "b"]
    domain: Literal["RGB", "LMS"] = "RGB"
    equalize: bool = False

    def __post_init__(self):
        object.__setattr__(self, "method", str(self.method).lower())
        object.__setattr__(self, "domain", str(self.domain).upper())
        if self.method not in ("a", "b"):
            raise ValueError(f"method must be 'a' or 'b', got {self.method!r}")
        if self.domain not in ("RGB", "LMS"):
            raise ValueError(f"domain must be 'RGB' or 'LMS', got {self.domain!r}")


@dataclass(frozen=True)
class FuzzyWeights:
    x_p: float
    x_d: float
    x_n: float


def fuzzy_weights(profile: FuzzyProfile) -> FuzzyWeights:
    """Rule activations (min-conjunction, complement negation), normalized.

    With zero evidence in all three rules the weights degenerate to
    (0, 0, 1): no sign of color blindness means the image passes through.
    """
    x_p = min(profile.beta, profile.alpha_p)
    x_d = min(profile.beta, profile.alpha_d)
    x_n = min(profile.alpha_n, 1.0 - profile.beta)
    total = x_p + x_d + x_n
    if total == 0.0:
        return FuzzyWeights(0.0, 0.0, 1.0)
    return FuzzyWeights(x_p / total, x_d / total, x_n / total)


def _equalize_unit_plane(plane: np.ndarray) -> np.ndarray:
    """Equalize a float plane: quantize to bytes, CDF-map, back to [0, 1]."""
    return equalize(quantize_plane(plane)).astype(np.float64) / 255.0


def method_a_protan(img: ImageF, equalize_bands: bool = False) -> ImageF:
    """Average the red band into green and blue; red stays untouched."""
    r = img.pixels[..., 0]
    g = (img.pixels[..., 0] + img.pixels[..., 1]) / 2.0
    b = (img.pixels[..., 0] + img.pixels[..., 2]) / 2.0
    if equalize_bands:
        g = _equalize_unit_plane(g)
        b = _equalize_unit_plane(b)
    return ImageF(np.stack([r, g, b], axis=-1), img.space)


def method_a_deuteran(img: ImageF, equalize_bands: bool = False) -> ImageF:
    """Average the green band into red and blue; green stays untouched."""
    r = (img.pixels[..., 0] + img.pixels[..., 1]) / 2.0
    g = img.pixels[..., 1]
    b = (img.pixels[..., 1] + img.pixels[..., 2]) / 2.0
    if equalize_bands:
        r = _equalize_unit_plane(r)
        b = _equalize_unit_plane(b)
    return ImageF(np.stack([r, g, b], axis=-1), img.space)


def _method_a_case_images(f: ImageF, opts: CorrectionOptions) -> tuple[ImageF, ImageF]:
    """The two absolute-case corrections, as RGB float images."""
    if opts.domain == "RGB":
        return (
            method_a_protan(f, opts.equalize),
            method_a_deuteran(f, opts.equalize),
        )
    lms = rgb_to_lms(f)
    scaled = ImageF(lms.pixels / LMS_PLANE_MAX, "LMS")
    out = []
    for filt in (method_a_protan, method_a_deuteran):
        filtered = filt(scaled, opts.equalize)
        out.append(lms_to_rgb(ImageF(filtered.pixels * LMS_PLANE_MAX, "LMS")))
    return out[0], out[1]


def method_a(img: Image8, profile: FuzzyProfile, opts: CorrectionOptions) -> Image8:
    """Weighted blend of the two case corrections and the original."""
    if opts.method != "a":
        raise ValueError(f"method_a called with options for method {opts.method!r}")
    f = to_float(img)
    f_p, f_d = _method_a_case_images(f, opts)
    w = fuzzy_weights(profile)
    blended = w.x_p * f_p.pixels + w.x_d * f_d.pixels + w.x_n * f.pixels
    return to_bytes(ImageF(blended, "RGB"))


def method_b_matrix(alpha_p: float, alpha_d: float) -> np.ndarray:
    """Unified correction transform; rows sum to one for any degree pair."""
    ap = check_degree("alpha_p", alpha_p)
    ad = check_degree("alpha_d", alpha_d)
    return np.array(
        [
            [1.0 - ad / 2.0, ad / 2.0, 0.0],
            [ap / 2.0, 1.0 - ap / 2.0, 0.0],
            [ap / 4.0, ad / 4.0, 1.0 - (ap + ad) / 4.0],
        ]
    )


def method_b_float(f: ImageF, profile: FuzzyProfile, opts: CorrectionOptions) -> ImageF:
    """Method B transform in float space, RGB in / RGB out, no equalization
    or quantization; exposed so range properties can be checked pre-clamp."""
    m = method_b_matrix(profile.alpha_p, profile.alpha_d)
    if opts.domain == "RGB":
        return apply_matrix(f, m)
    return lms_to_rgb(apply_matrix(rgb_to_lms(f), m))


def method_b(img: Image8, profile: FuzzyProfile, opts: CorrectionOptions) -> Image8:
    if opts.method != "b":
        raise ValueError(f"method_b called with options for method {opts.method!r}")
    out = method_b_float(to_float(img), profile, opts)
    if opts.equalize:
        planes = [_equalize_unit_plane(out.pixels[..., c]) for c in range(3)]
        out = ImageF(np.stack(planes, axis=-1), "RGB")
    return to_bytes(out)


def correct(img: Image8, profile: FuzzyProfile, opts: CorrectionOptions) -> Image8:
    """Dispatch to the selected correction method."""
    if opts.method == "a":
        return method_a(img, profile, opts)
    return method_b(img, profile, opts)


# ---------------------------------------------------------------------------
# Profile interchange document (consumed by the CLI and the HTTP service)

def profile_to_document(
    profile: FuzzyProfile,
    session_id: str | None = None,
    timestamp: str | None = None,
) -> dict:
    return {
        "session_id": session_id,
        "timestamp": timestamp
        or _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "beta": profile.beta,
        "alpha_p": profile.alpha_p,
        "alpha_d": profile.alpha_d,
        "alpha_n": profile.alpha_n,
    }


def profile_from_document(doc: dict) -> FuzzyProfile:
    try:
        return FuzzyProfile(
            beta=doc["beta"],
            alpha_p=doc["alpha_p"],
            alpha_d=doc["alpha_d"],
            alpha_n=doc["alpha_n"],
        )
    except KeyError as exc:
        raise ValueError(f"profile document is missing field {exc.args[0]!r}") from exc


def save_profile(path: str | Path, profile: FuzzyProfile, session_id: str | None = None) -> None:
    Path(path).write_text(
        json.dumps(profile_to_document(profile, session_id), indent=2) + "\n"
    )


def load_profile(path: str | Path) -> FuzzyProfile:
    return profile_from_document(json.loads(Path(path).read_text()))
