import numpy as np
import pytest

from cvdkit.core import Image8, save_image


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)


def random_image(rng, width=32, height=24) -> Image8:
    return Image8(rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8))


def pixel_image(pixels) -> Image8:
    """One-row image from a list of (r, g, b) byte triples."""
    return Image8(np.array([pixels], dtype=np.uint8))


def full_range_image() -> Image8:
    """16x16 image whose channels jointly cover all 256 byte values."""
    v = np.arange(256, dtype=np.uint8).reshape(16, 16)
    return Image8(np.stack([v, v[::-1], v.T], axis=-1))


def write_corpus(dir_path, rng, count=10, size=32):
    dir_path.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(count):
        img = random_image(rng, width=size, height=size)
        p = dir_path / f"img{i:02d}.png"
        save_image(img, p)
        paths.append(p)
    return paths
