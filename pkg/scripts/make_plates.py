#!/usr/bin/env python3
"""Render the bundled placeholder plate rasters.

Reads the plate table from src/cvdkit/data/plates.json and draws one
dot-mosaic PNG per plate: a jittered circle grid where dots under the
digit strokes take the figure palette and the rest the ground palette.
Purely decorative stand-ins for licensed plate scans; the test engine
only needs consistent files to reference. Deterministic per plate id.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

SIZE = 240
DOT_STEP = 11

# seven-segment layout: A top, B tr, C br, D bottom, E bl, F tl, G middle
SEGMENTS = {
    "0": "ABCDEF",
    "1": "BC",
    "2": "ABGED",
    "3": "ABGCD",
    "4": "FGBC",
    "5": "AFGCD",
    "6": "AFGEDC",
    "7": "ABC",
    "8": "ABCDEFG",
    "9": "ABCDFG",
}

FIGURE_PALETTE = [(196, 90, 62), (214, 118, 74), (183, 77, 88), (205, 104, 57)]
GROUND_PALETTE = [(126, 148, 92), (149, 158, 108), (168, 167, 128), (139, 139, 94)]
PAPER = (233, 224, 204)


def digit_mask(text: str) -> np.ndarray:
    """Boolean stroke mask of up to two seven-segment digits."""
    mask = np.zeros((SIZE, SIZE), dtype=bool)
    n = len(text)
    digit_w, digit_h = 70, 120
    gap = 24
    total_w = n * digit_w + (n - 1) * gap
    x0 = (SIZE - total_w) // 2
    y0 = (SIZE - digit_h) // 2
    t = 16  # stroke thickness

    for k, ch in enumerate(text):
        segs = SEGMENTS.get(ch, "")
        dx = x0 + k * (digit_w + gap)
        boxes = {
            "A": (dx, y0, dx + digit_w, y0 + t),
            "B": (dx + digit_w - t, y0, dx + digit_w, y0 + digit_h // 2),
            "C": (dx + digit_w - t, y0 + digit_h // 2, dx + digit_w, y0 + digit_h),
            "D": (dx, y0 + digit_h - t, dx + digit_w, y0 + digit_h),
            "E": (dx, y0 + digit_h // 2, dx + t, y0 + digit_h),
            "F": (dx, y0, dx + t, y0 + digit_h // 2),
            "G": (dx, y0 + digit_h // 2 - t // 2, dx + digit_w, y0 + digit_h // 2 + t // 2),
        }
        for seg in segs:
            x1, y1, x2, y2 = boxes[seg]
            mask[y1:y2, x1:x2] = True
    return mask


def plate_digits(plate: dict) -> str:
    """Digits to draw: the canonical reading, else the deficient reading."""
    options = plate["options"]
    canonical = next(o for o in options if o.get("canonical"))
    if canonical["label"].isdigit():
        return canonical["label"]
    for o in options:
        if o["label"].isdigit():
            return o["label"]
    return ""


def render_plate(plate: dict, index: int) -> Image.Image:
    rng = np.random.default_rng(1000 + index)
    digits = plate_digits(plate)
    mask = digit_mask(digits) if digits else np.zeros((SIZE, SIZE), dtype=bool)

    im = Image.new("RGB", (SIZE, SIZE), PAPER)
    draw = ImageDraw.Draw(im)
    for gy in range(DOT_STEP // 2, SIZE, DOT_STEP):
        for gx in range(DOT_STEP // 2, SIZE, DOT_STEP):
            cx = gx + rng.integers(-2, 3)
            cy = gy + rng.integers(-2, 3)
            r = int(rng.integers(3, 6))
            if not (0 <= cx < SIZE and 0 <= cy < SIZE):
                continue
            palette = FIGURE_PALETTE if mask[cy, cx] else GROUND_PALETTE
            base = palette[int(rng.integers(0, len(palette)))]
            jitter = rng.integers(-12, 13, size=3)
            color = tuple(int(np.clip(c + j, 0, 255)) for c, j in zip(base, jitter))
            draw.ellipse([cx - r, cy - r, cx + r, cy + r], fill=color)
    return im


def main() -> int:
    data_dir = Path(__file__).resolve().parent.parent / "src" / "cvdkit" / "data"
    table = json.loads((data_dir / "plates.json").read_text())
    out_dir = data_dir / "plates"
    out_dir.mkdir(exist_ok=True)
    for index, plate in enumerate(table["plates"]):
        im = render_plate(plate, index)
        target = data_dir / plate["image"]
        im.save(target)
        print(f"wrote {target}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
