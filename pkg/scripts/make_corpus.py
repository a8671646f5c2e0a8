#!/usr/bin/env python3
"""Generate a deterministic 10-image demo corpus for the survey tools.

The images are synthetic but deliberately heavy on red/green content so
the deficit simulation and corrections have something to act on:
gradients, color wheels, dot mosaics and patch grids.

Usage: make_corpus.py [OUT_DIR] [SIZE]
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
from PIL import Image


def gradient(size: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = np.linspace(0, 1, size)
    y = np.linspace(0, 1, size)
    gx, gy = np.meshgrid(x, y)
    a, b, c = rng.random(3)
    r = (a * gx + (1 - a) * gy) % 1.0
    g = (b * (1 - gx) + (1 - b) * gy) % 1.0
    bl = (c * gx * gy + (1 - c) * (1 - gx)) % 1.0
    return np.stack([r, g, bl], axis=-1)


def wheel(size: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = np.linspace(-1, 1, size)
    gx, gy = np.meshgrid(x, x)
    angle = (np.arctan2(gy, gx) / (2 * np.pi)) % 1.0
    radius = np.sqrt(gx**2 + gy**2).clip(0, 1)
    phase = rng.random()
    r = 0.5 + 0.5 * np.cos(2 * np.pi * (angle + phase))
    g = 0.5 + 0.5 * np.cos(2 * np.pi * (angle + phase + 1 / 3))
    b = 0.5 + 0.5 * np.cos(2 * np.pi * (angle + phase + 2 / 3))
    fade = 1.0 - 0.4 * radius
    return np.stack([r * fade, g * fade, b * fade], axis=-1)


def dots(size: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    img = np.full((size, size, 3), 0.9)
    reds = np.array([[0.78, 0.28, 0.22], [0.85, 0.45, 0.25]])
    greens = np.array([[0.35, 0.60, 0.30], [0.52, 0.65, 0.35]])
    step = max(size // 25, 4)
    yy, xx = np.mgrid[0:size, 0:size]
    for cy in range(step // 2, size, step):
        for cx in range(step // 2, size, step):
            palette = reds if (cx + cy) // step % 2 == 0 else greens
            color = palette[rng.integers(0, 2)] + rng.normal(0, 0.03, 3)
            rad = step * 0.45
            m = (yy - cy) ** 2 + (xx - cx) ** 2 <= rad**2
            img[m] = color.clip(0, 1)
    return img


def patches(size: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    n = 6
    cell = size // n
    img = np.zeros((size, size, 3))
    for i in range(n):
        for j in range(n):
            img[i * cell:(i + 1) * cell, j * cell:(j + 1) * cell] = rng.random(3)
    return img[:size, :size]


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("corpus")
    size = int(sys.argv[2]) if len(sys.argv) > 2 else 300
    out_dir.mkdir(parents=True, exist_ok=True)
    makers = [gradient, wheel, dots, patches]
    for i in range(10):
        arr = makers[i % len(makers)](size, seed=500 + i)
        data = np.floor(arr.clip(0, 1) * 255 + 0.5).astype(np.uint8)
        path = out_dir / f"base{i:02d}.png"
        Image.fromarray(data, "RGB").save(path)
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
