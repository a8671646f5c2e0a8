import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from cvdkit.histogram import equalization_lut, equalize, histogram

from oracle_values import EQUALIZE_FOUR_IN, EQUALIZE_FOUR_OUT

planes = arrays(
    dtype=np.uint8,
    shape=st.tuples(st.integers(1, 12), st.integers(1, 12)),
)


class TestHistogram:
    def test_all_zero_plane(self):
        bins = histogram(np.zeros((2, 2), dtype=np.uint8))
        assert bins[0] == 4
        assert bins[1:].sum() == 0

    def test_small_fixture(self):
        bins = histogram(np.array([[0, 1], [1, 3]], dtype=np.uint8))
        assert bins[0] == 1 and bins[1] == 2 and bins[3] == 1
        assert bins.sum() == 4

    @given(planes)
    def test_counts_sum_to_pixel_count(self, plane):
        assert histogram(plane).sum() == plane.size

    def test_empty_plane_rejected(self):
        with pytest.raises(ValueError):
            histogram(np.zeros((0,), dtype=np.uint8))
        with pytest.raises(ValueError):
            equalize(np.zeros((0,), dtype=np.uint8))

    def test_wrong_dtype_rejected(self):
        with pytest.raises(ValueError):
            histogram(np.zeros((2, 2), dtype=np.uint16))


class TestEqualize:
    @pytest.mark.parametrize("value", [0, 7, 128, 255])
    def test_constant_plane_maps_to_255(self, value):
        plane = np.full((4, 4), value, dtype=np.uint8)
        assert (equalize(plane) == 255).all()

    def test_uniform_plane_is_near_identity(self):
        plane = np.arange(256, dtype=np.uint8).reshape(16, 16)
        out = equalize(plane)
        assert np.abs(out.astype(int) - plane.astype(int)).max() <= 1

    def test_four_level_fixture(self):
        plane = np.array(EQUALIZE_FOUR_IN, dtype=np.uint8)
        assert list(equalize(plane)) == EQUALIZE_FOUR_OUT

    @given(planes)
    @settings(max_examples=50)
    def test_mapping_is_monotone(self, plane):
        lut = equalization_lut(plane)
        assert (np.diff(lut.astype(int)) >= 0).all()

    def test_rank_preservation(self, rng):
        for _ in range(20):
            plane = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
            lut = equalization_lut(plane)
            levels = np.sort(np.unique(plane))
            mapped = lut[levels].astype(int)
            assert (np.diff(mapped) >= 0).all()

    def test_double_application_changes_at_most_one_level(self, rng):
        for _ in range(10):
            plane = rng.integers(0, 256, size=(64, 64), dtype=np.uint8)
            once = equalize(plane)
            twice = equalize(once)
            assert np.abs(twice.astype(int) - once.astype(int)).max() <= 1

    def test_output_cdf_is_nearly_uniform(self, rng):
        plane = rng.integers(0, 256, size=(1000, 1000), dtype=np.uint8)
        out = equalize(plane)
        cdf = np.cumsum(np.bincount(out.ravel(), minlength=256)) / out.size
        ramp = (np.arange(256) + 1) / 256
        assert np.abs(cdf - ramp).max() <= 2 / 256
