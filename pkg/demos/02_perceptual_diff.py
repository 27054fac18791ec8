"""
Perceptual color differences
============================

Colors are compared in CIE L*a*b*, where straight-line distance tracks what
people actually see. Anything below about 2.3 is invisible.
"""

import numpy as np

from gui_verify import ScreenImage
from gui_verify.percept import (
    color_histogram,
    delta_e_rgb,
    dominant_color,
    perceptual_region_diff,
    secondary_color,
    srgb_to_lab,
)

###############################################################################
# Pure red lands at roughly L=53, a=80, b=67. Grays have no chroma.

print(srgb_to_lab((255, 0, 0)))
print(srgb_to_lab((128, 128, 128)))

###############################################################################
# Equal RGB steps are not equal perceptual steps: the same 10-unit change
# reads very differently in the dark and in the saturated blue.

for a, b in [((0, 0, 0), (10, 10, 10)), ((245, 245, 245), (255, 255, 255)), ((0, 0, 200), (0, 0, 210))]:
    print(f"{a} -> {b}: dE = {delta_e_rgb(a, b):.2f}")

###############################################################################
# Region diffs count the pixels whose change clears the visibility threshold.
# Nudge 30% of a gray patch by two levels (invisible) and another 20% by
# thirty (obvious).

rng = np.random.default_rng(0)
base = np.full((40, 40, 3), 128, dtype=np.uint8)
changed = base.copy().reshape(-1, 3)
idx = rng.permutation(len(changed))
changed[idx[:480]] += 2
changed[idx[480:800]] += 30
diff = perceptual_region_diff(ScreenImage(base), ScreenImage(changed.reshape(base.shape)))
print(f"differing fraction {diff.differing_fraction:.3f}, mean dE {diff.mean_delta_e:.2f}")

###############################################################################
# A 4-bit-per-channel histogram summarizes a region. The most populated bin
# is the background; the runner-up stands in for text ink.

label = np.full((20, 60, 3), 250, dtype=np.uint8)
label[6:14, 5:55:4] = (30, 30, 160)
hist = color_histogram(ScreenImage(label))
print("background", dominant_color(hist), "ink", secondary_color(hist))
