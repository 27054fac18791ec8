import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from skimage.color import rgb2lab

from gui_verify import errors
from gui_verify.model import ScreenImage
from gui_verify.percept import (
    ColorHistogram,
    LabColor,
    N_BINS,
    color_histogram,
    delta_e,
    dominant_color,
    histogram_intersection,
    perceptual_region_diff,
    secondary_color,
    srgb_to_lab,
    srgb_to_lab_array,
)


def reference_lab(rgb):
    """Independent sRGB -> Lab (D65) conversion."""
    return rgb2lab(np.array([[rgb]], dtype=np.float64) / 255.0, illuminant="D65")[0, 0]


def image(rows):
    return ScreenImage(np.array(rows, dtype=np.uint8))


def uniform(w, h, rgb):
    return ScreenImage.filled(w, h, rgb)


class TestSrgbToLab:
    def test_black(self):
        assert srgb_to_lab((0, 0, 0)).as_tuple() == pytest.approx((0, 0, 0), abs=1e-9)

    def test_white(self):
        assert srgb_to_lab((255, 255, 255)).as_tuple() == pytest.approx((100, 0, 0), abs=1e-9)

    def test_red_against_reference(self):
        ours = srgb_to_lab((255, 0, 0)).as_tuple()
        ref = reference_lab((255, 0, 0))
        assert ours == pytest.approx(tuple(ref), abs=0.05)
        assert ours == pytest.approx((53.24, 80.09, 67.20), abs=0.05)

    def test_all_colors_against_reference(self, rng):
        colors = rng.integers(0, 256, size=(500, 3))
        ours = srgb_to_lab_array(colors.astype(np.uint8))
        ref = rgb2lab(colors[None].astype(np.float64) / 255.0)[0]
        assert np.abs(ours - ref).max() < 0.05

    def test_grays_are_neutral_and_monotone(self):
        lab = [srgb_to_lab((v, v, v)) for v in range(256)]
        assert max(abs(c.a) for c in lab) < 1e-6
        assert max(abs(c.b) for c in lab) < 1e-6
        lightness = [c.L for c in lab]
        assert all(b > a for a, b in zip(lightness, lightness[1:]))

    def test_channel_range_checked(self):
        with pytest.raises(ValueError):
            srgb_to_lab((256, 0, 0))


class TestDeltaE:
    def test_identical(self):
        c = LabColor(50, 10, -10)
        assert delta_e(c, c) == 0

    def test_black_white(self):
        assert delta_e(srgb_to_lab((0, 0, 0)), srgb_to_lab((255, 255, 255))) == pytest.approx(100)

    def test_red_vs_black(self):
        red = LabColor(53.24, 80.09, 67.20)
        expected = math.sqrt(53.24 ** 2 + 80.09 ** 2 + 67.20 ** 2)
        assert delta_e(red, LabColor(0, 0, 0)) == pytest.approx(expected, abs=1e-9)
        assert expected == pytest.approx(117.32, abs=0.01)

    @settings(max_examples=300)
    @given(*[st.tuples(st.floats(0, 100), st.floats(-128, 128), st.floats(-128, 128))] * 3)
    def test_metric_axioms(self, p, q, r):
        a, b, c = LabColor(*p), LabColor(*q), LabColor(*r)
        assert delta_e(a, b) >= 0
        assert delta_e(a, b) == delta_e(b, a)
        assert delta_e(a, c) <= delta_e(a, b) + delta_e(b, c) + 1e-9
        assert (delta_e(a, b) == 0) == (p == q)


class TestRegionDiff:
    def test_identity(self, rng):
        img = ScreenImage(rng.integers(0, 256, (7, 9, 3)))
        d = perceptual_region_diff(img, img)
        assert d.differing_fraction == 0 and d.mean_delta_e == 0 and not d.mask.any()

    def test_black_vs_white(self):
        d = perceptual_region_diff(uniform(10, 10, (0, 0, 0)), uniform(10, 10, (255, 255, 255)))
        assert d.differing_fraction == 1.0
        assert d.mean_delta_e == pytest.approx(100)

    def test_half_changed(self):
        b = np.zeros((10, 10, 3), dtype=np.uint8)
        b[:, 5:] = 255
        d = perceptual_region_diff(uniform(10, 10, (0, 0, 0)), ScreenImage(b))
        assert d.differing_fraction == 0.5
        assert d.mean_delta_e == pytest.approx(50)
        assert d.mask[:, 5:].all() and not d.mask[:, :5].any()

    def test_below_jnd_not_flagged(self):
        d = perceptual_region_diff(uniform(4, 4, (128, 128, 128)), uniform(4, 4, (129, 129, 129)))
        assert d.differing_fraction == 0 and 0 < d.mean_delta_e < 2.3

    def test_resampled_nearest(self):
        small = np.zeros((2, 2, 3), dtype=np.uint8)
        small[:, 1] = 255
        big = np.zeros((4, 4, 3), dtype=np.uint8)
        big[:, 2:] = 255
        d = perceptual_region_diff(ScreenImage(big), ScreenImage(small))
        assert d.resampled and d.differing_fraction == 0

    def test_fraction_matches_mask(self, rng):
        a = ScreenImage(rng.integers(0, 256, (6, 6, 3)))
        b = ScreenImage(rng.integers(0, 256, (6, 6, 3)))
        d = perceptual_region_diff(a, b)
        assert d.differing_fraction == d.mask.sum() / d.mask.size

    def test_empty(self):
        with pytest.raises(errors.EmptyRegion):
            perceptual_region_diff(None, uniform(1, 1, (0, 0, 0)))


class TestHistogram:
    def test_uniform_white(self):
        h = color_histogram(uniform(3, 3, (255, 255, 255)))
        assert h.total == 9 and h.bins[N_BINS - 1] == 9 and np.count_nonzero(h.bins) == 1

    def test_black_and_white(self):
        h = color_histogram(image([[[0, 0, 0], [255, 255, 255]]]))
        assert h.bins[0] == 1 and h.bins[4095] == 1 and h.total == 2

    def test_quantization(self):
        h = color_histogram(image([[[16, 16, 16], [17, 17, 17]]]))
        index = (1 << 8) | (1 << 4) | 1
        assert h.bins[index] == 2

    def test_dominant_white(self):
        assert dominant_color(color_histogram(uniform(5, 5, (255, 255, 255)))) == (248, 248, 248)

    def test_dominant_majority(self):
        px = np.zeros((10, 10, 3), dtype=np.uint8)
        px[6:] = 255
        assert dominant_color(color_histogram(ScreenImage(px))) == (8, 8, 8)

    def test_dominant_tie_lowest_index(self):
        bins = np.zeros(N_BINS, dtype=np.int64)
        bins[0] = bins[4095] = 5
        assert dominant_color(ColorHistogram(bins, 10)) == (8, 8, 8)

    def test_dominant_empty(self):
        with pytest.raises(errors.EmptyHistogram):
            dominant_color(ColorHistogram(np.zeros(N_BINS, dtype=np.int64), 0))

    def test_secondary(self):
        px = np.zeros((10, 10, 3), dtype=np.uint8)
        px[7:] = (255, 0, 0)
        h = color_histogram(ScreenImage(px))
        assert secondary_color(h) == (248, 8, 8)
        assert secondary_color(color_histogram(uniform(2, 2, (0, 0, 0)))) == (8, 8, 8)

    def test_intersection(self):
        black = color_histogram(uniform(4, 4, (0, 0, 0)))
        white = color_histogram(uniform(4, 4, (255, 255, 255)))
        half = np.zeros((4, 4, 3), dtype=np.uint8)
        half[2:] = 255
        assert histogram_intersection(black, black) == 1.0
        assert histogram_intersection(black, white) == 0.0
        assert histogram_intersection(color_histogram(ScreenImage(half)), black) == 0.5

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**31), st.integers(1, 12), st.integers(1, 12))
    def test_totals_and_permutation_invariance(self, seed, w, h):
        r = np.random.default_rng(seed)
        px = r.integers(0, 256, (h, w, 3)).astype(np.uint8)
        hist = color_histogram(ScreenImage(px))
        assert hist.total == w * h == hist.bins.sum()
        shuffled = r.permutation(px.reshape(-1, 3)).reshape(px.shape)
        assert color_histogram(ScreenImage(shuffled)) == hist
        assert histogram_intersection(hist, hist) == pytest.approx(1.0, abs=1e-12)

    def test_intersection_of_empty(self):
        empty = ColorHistogram(np.zeros(N_BINS, dtype=np.int64), 0)
        with pytest.raises(errors.EmptyHistogram):
            histogram_intersection(empty, empty)
