"""Perceptual color math: sRGB to CIE L*a*b*, CIE76 delta-E, region diffs, histograms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyHistogram, EmptyRegion
from .model import ScreenImage

# sRGB (D65) -> XYZ. The reference white is taken as the row sums so that
# neutral grays land exactly on a = b = 0.
_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_WHITE_D65 = _RGB_TO_XYZ.sum(axis=1)
_EPS = 216 / 24389
_KAPPA = 24389 / 27

# 8-bit value -> linear light, precomputed.
_LINEAR = np.where(
    np.arange(256) / 255.0 <= 0.04045,
    np.arange(256) / 255.0 / 12.92,
    ((np.arange(256) / 255.0 + 0.055) / 1.055) ** 2.4,
)

N_BINS = 4096


@dataclass(frozen=True)
class LabColor:
    L: float
    a: float
    b: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.L, self.a, self.b)


def srgb_to_lab_array(rgb) -> np.ndarray:
    """Convert an ``(..., 3)`` uint8 array to float64 Lab of the same shape."""
    rgb = np.asarray(rgb, dtype=np.uint8)
    xyz = _LINEAR[rgb] @ _RGB_TO_XYZ.T / _WHITE_D65
    f = np.where(xyz > _EPS, np.cbrt(xyz), (_KAPPA * xyz + 16) / 116)
    lab = np.empty(rgb.shape, dtype=np.float64)
    lab[..., 0] = 116 * f[..., 1] - 16
    lab[..., 1] = 500 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200 * (f[..., 1] - f[..., 2])
    return lab


def srgb_to_lab(rgb) -> LabColor:
    r, g, b = (int(v) for v in rgb)
    if not all(0 <= v <= 255 for v in (r, g, b)):
        raise ValueError(f"RGB channels must lie in [0, 255], got {(r, g, b)}")
    L, a, bb = srgb_to_lab_array(np.array([r, g, b], dtype=np.uint8))
    return LabColor(float(L), float(a), float(bb))


def delta_e(c1: LabColor, c2: LabColor) -> float:
    """CIE76 color difference."""
    return math.hypot(c1.L - c2.L, c1.a - c2.a, c1.b - c2.b)


def delta_e_rgb(rgb1, rgb2) -> float:
    return delta_e(srgb_to_lab(rgb1), srgb_to_lab(rgb2))


@dataclass(frozen=True, eq=False)
class PerceptualDiff:
    differing_fraction: float
    mean_delta_e: float
    mask: np.ndarray
    resampled: bool = False


def resize_nearest(pixels: np.ndarray, height: int, width: int) -> np.ndarray:
    """Nearest-neighbor resample of an ``(h, w, ...)`` array by pixel-center mapping."""
    src_h, src_w = pixels.shape[:2]
    rows = np.minimum((np.arange(height) * 2 + 1) * src_h // (2 * height), src_h - 1)
    cols = np.minimum((np.arange(width) * 2 + 1) * src_w // (2 * width), src_w - 1)
    return pixels[rows[:, None], cols[None, :]]


def perceptual_region_diff(a: ScreenImage, b: ScreenImage, jnd: float = 2.3) -> PerceptualDiff:
    """Per-pixel delta-E of ``b`` against ``a``.

    ``b`` is resampled to ``a``'s size by nearest neighbor when the two differ;
    the result records that it happened.
    """
    if a is None or b is None or a.pixels.size == 0 or b.pixels.size == 0:
        raise EmptyRegion("cannot diff an empty region")
    pa, pb = a.pixels, b.pixels
    resampled = pa.shape != pb.shape
    if resampled:
        pb = resize_nearest(pb, a.height, a.width)
    if np.array_equal(pa, pb):
        mask = np.zeros(pa.shape[:2], dtype=bool)
        return PerceptualDiff(0.0, 0.0, mask, resampled)
    de = np.sqrt(((srgb_to_lab_array(pa) - srgb_to_lab_array(pb)) ** 2).sum(axis=-1))
    mask = de > jnd
    return PerceptualDiff(float(mask.mean()), float(de.mean()), mask, resampled)


@dataclass(frozen=True, eq=False)
class ColorHistogram:
    bins: np.ndarray
    total: int

    def __eq__(self, other):
        if not isinstance(other, ColorHistogram):
            return NotImplemented
        return self.total == other.total and np.array_equal(self.bins, other.bins)

    def ranked_bins(self) -> np.ndarray:
        """Non-empty bin indices by count descending, ties by lowest index."""
        nz = np.flatnonzero(self.bins)
        order = np.lexsort((nz, -self.bins[nz]))
        return nz[order]


def bin_index(pixels: np.ndarray) -> np.ndarray:
    p = np.asarray(pixels, dtype=np.uint16) >> 4
    return (p[..., 0] << 8) | (p[..., 1] << 4) | p[..., 2]


def bin_centroid(index: int) -> tuple[int, int, int]:
    index = int(index)
    return ((index >> 8) * 16 + 8, ((index >> 4) & 15) * 16 + 8, (index & 15) * 16 + 8)


def color_histogram(img: ScreenImage) -> ColorHistogram:
    if img is None or img.pixels.size == 0:
        raise EmptyRegion("cannot histogram an empty region")
    bins = np.bincount(bin_index(img.pixels).ravel(), minlength=N_BINS).astype(np.int64)
    return ColorHistogram(bins, int(bins.sum()))


def dominant_color(h: ColorHistogram) -> tuple[int, int, int]:
    if h.total < 1:
        raise EmptyHistogram("histogram is empty")
    return bin_centroid(int(np.argmax(h.bins)))


def secondary_color(h: ColorHistogram) -> tuple[int, int, int]:
    """Centroid of the second-ranked bin; the dominant one if only one bin is populated."""
    if h.total < 1:
        raise EmptyHistogram("histogram is empty")
    ranked = h.ranked_bins()
    return bin_centroid(ranked[1] if len(ranked) > 1 else ranked[0])


def histogram_intersection(h1: ColorHistogram, h2: ColorHistogram) -> float:
    if h1.total < 1 or h2.total < 1:
        raise EmptyHistogram("histogram is empty")
    return float(np.minimum(h1.bins / h1.total, h2.bins / h2.total).sum())
