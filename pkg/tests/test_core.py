import numpy as np
import pytest
from hypothesis import given, strategies as st

from cvdkit.core import (
    RGB_TO_LMS,
    Image8,
    ImageF,
    SingularMatrixError,
    SpaceTagError,
    apply_matrix,
    invert3,
    lms_to_rgb,
    load_image,
    quantize_plane,
    rgb_to_lms,
    save_image,
    to_bytes,
    to_float,
)

from conftest import full_range_image, pixel_image, random_image
from oracle_values import PRINTED_LMS_TO_RGB, RGB_TO_LMS_ROW_SUMS


def imgf(*pixels, space="RGB"):
    return ImageF(np.array([pixels], dtype=np.float64), space)


class TestTypes:
    def test_image8_shape_and_props(self, rng):
        img = random_image(rng, width=7, height=5)
        assert (img.width, img.height) == (7, 5)
        assert img.pixels.shape == (5, 7, 3)

    @pytest.mark.parametrize(
        "bad",
        [
            np.zeros((0, 4, 3), dtype=np.uint8),
            np.zeros((4, 4, 4), dtype=np.uint8),
            np.zeros((4, 4), dtype=np.uint8),
        ],
    )
    def test_image8_rejects_bad_shapes(self, bad):
        with pytest.raises(ValueError):
            Image8(bad)

    def test_image8_rejects_wrong_dtype(self):
        with pytest.raises(ValueError):
            Image8(np.zeros((2, 2, 3), dtype=np.float64))

    def test_imagef_rejects_unknown_space(self):
        with pytest.raises(ValueError):
            ImageF(np.zeros((2, 2, 3)), "XYZ")

    def test_pixels_are_immutable(self, rng):
        img = random_image(rng)
        with pytest.raises(ValueError):
            img.pixels[0, 0, 0] = 1


class TestInvert3:
    def test_identity(self):
        assert np.array_equal(invert3(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        out = invert3(np.diag([2.0, 4.0, 8.0]))
        assert np.allclose(out, np.diag([0.5, 0.25, 0.125]), atol=1e-15)

    def test_matches_printed_conversion_matrix(self):
        inv = invert3(RGB_TO_LMS)
        assert np.abs(inv - np.array(PRINTED_LMS_TO_RGB)).max() < 5e-4

    def test_product_is_identity(self):
        inv = invert3(RGB_TO_LMS)
        assert np.abs(RGB_TO_LMS @ inv - np.eye(3)).max() < 1e-10

    def test_singular_carries_determinant(self):
        singular = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 1.0]])
        with pytest.raises(SingularMatrixError) as exc_info:
            invert3(singular)
        assert abs(exc_info.value.determinant) <= 1e-12

    def test_well_conditioned_random(self, rng):
        for _ in range(50):
            m = rng.normal(size=(3, 3)) + 3 * np.eye(3)
            assert np.abs(m @ invert3(m) - np.eye(3)).max() < 1e-10


class TestApplyMatrix:
    def test_identity_is_bitwise_noop(self, rng):
        img = to_float(random_image(rng))
        out = apply_matrix(img, np.eye(3))
        assert np.array_equal(out.pixels, img.pixels)
        assert out.space == img.space

    def test_diagonal_scaling(self):
        out = apply_matrix(imgf((0.2, 0.4, 0.6)), np.diag([2.0, 1.0, 0.5]))
        assert np.allclose(out.pixels[0, 0], [0.4, 0.4, 0.3], atol=1e-15)

    def test_composition(self, rng):
        img = to_float(random_image(rng))
        a = rng.normal(size=(3, 3))
        b = rng.normal(size=(3, 3))
        chained = apply_matrix(apply_matrix(img, a), b)
        fused = apply_matrix(img, b @ a)
        assert np.abs(chained.pixels - fused.pixels).max() < 1e-12

    def test_linearity(self, rng):
        x = to_float(random_image(rng))
        y = to_float(random_image(rng))
        m = rng.normal(size=(3, 3))
        mixed = apply_matrix(ImageF(0.3 * x.pixels + 0.7 * y.pixels), m)
        separate = 0.3 * apply_matrix(x, m).pixels + 0.7 * apply_matrix(y, m).pixels
        assert np.abs(mixed.pixels - separate).max() < 1e-12


class TestConversion:
    def test_zero_pixel(self):
        out = rgb_to_lms(imgf((0.0, 0.0, 0.0)))
        assert np.array_equal(out.pixels[0, 0], [0.0, 0.0, 0.0])
        assert out.space == "LMS"

    def test_pure_red_is_first_column(self):
        out = rgb_to_lms(imgf((1.0, 0.0, 0.0)))
        assert np.allclose(out.pixels[0, 0], [17.8824, 3.4557, 0.0300], atol=1e-12)

    def test_white_is_row_sums(self):
        out = rgb_to_lms(imgf((1.0, 1.0, 1.0)))
        assert np.allclose(out.pixels[0, 0], RGB_TO_LMS_ROW_SUMS, atol=1e-10)

    def test_round_trip_identity(self, rng):
        img = to_float(random_image(rng))
        back = lms_to_rgb(rgb_to_lms(img))
        assert np.abs(back.pixels - img.pixels).max() < 1e-10

    def test_wrong_space_tags_rejected(self, rng):
        img = to_float(random_image(rng))
        with pytest.raises(SpaceTagError):
            lms_to_rgb(img)
        with pytest.raises(SpaceTagError):
            rgb_to_lms(rgb_to_lms(img))

    def test_lms_to_rgb_zero(self):
        out = lms_to_rgb(imgf((0.0, 0.0, 0.0), space="LMS"))
        assert np.array_equal(out.pixels[0, 0], [0.0, 0.0, 0.0])


class TestQuantization:
    def test_byte_255_round_trips(self):
        img = pixel_image([(255, 255, 255)])
        f = to_float(img)
        assert f.pixels.max() == 1.0
        assert np.array_equal(to_bytes(f).pixels, img.pixels)

    def test_clamp_above_one(self):
        out = to_bytes(imgf((1.3, -0.2, 0.5)))
        assert tuple(out.pixels[0, 0]) == (255, 0, 128)

    def test_half_up_rounding(self):
        # 0.5 * 255 = 127.5 must round up
        assert quantize_plane(np.array([0.5]))[0] == 128

    def test_to_bytes_requires_rgb(self):
        with pytest.raises(SpaceTagError):
            to_bytes(imgf((0.1, 0.2, 0.3), space="LMS"))

    @given(st.integers(min_value=0, max_value=255))
    def test_bytes_float_bytes_is_exact(self, value):
        img = pixel_image([(value, value, value)])
        assert np.array_equal(to_bytes(to_float(img)).pixels, img.pixels)

    def test_float_round_trip_error_bound(self, rng):
        f = ImageF(rng.random((16, 16, 3)))
        back = to_float(to_bytes(f))
        assert np.abs(back.pixels - f.pixels).max() < 1 / 255 + 1e-9


class TestFileIO:
    @pytest.mark.parametrize("suffix", [".png", ".bmp"])
    def test_save_load_round_trip(self, rng, tmp_path, suffix):
        img = random_image(rng)
        path = tmp_path / f"img{suffix}"
        save_image(img, path)
        assert np.array_equal(load_image(path).pixels, img.pixels)

    def test_alpha_channel_is_discarded(self, rng, tmp_path):
        from PIL import Image as PILImage

        rgba = rng.integers(0, 256, size=(8, 8, 4), dtype=np.uint8)
        rgba[..., 3] = 255
        path = tmp_path / "rgba.png"
        PILImage.fromarray(rgba, "RGBA").save(path)
        loaded = load_image(path)
        assert loaded.pixels.shape == (8, 8, 3)
        assert np.array_equal(loaded.pixels, rgba[..., :3])

    def test_full_range_survives(self, tmp_path):
        img = full_range_image()
        path = tmp_path / "full.png"
        save_image(img, path)
        assert np.array_equal(load_image(path).pixels, img.pixels)
