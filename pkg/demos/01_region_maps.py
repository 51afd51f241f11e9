"""
Region maps
===========

Two binary maps of the same ear can disagree: a segmenter's mask and the
filled hull of a handful of landmark points. This script builds both for a
synthetic scene and combines them the four ways the warp can use.
"""

import numpy as np

from pawvit import maskops

# a 150x180 scene with an elliptical "segmentation" mask
h, w = 180, 150
ys, xs = np.mgrid[:h, :w] + 0.5
seg = ((xs - 75) / 50) ** 2 + ((ys - 95) / 72) ** 2 <= 1

# landmarks are pixel indices (x, y); their convex hull is filled at pixel centers
points = np.array([[40, 30], [110, 35], [125, 110], [90, 170], [35, 140]], float)
lm = maskops.landmarks_to_mask(points, w, h)
print("segmentation pixels:", seg.sum(), " landmark pixels:", lm.sum())

###############################################################################
# Every map is taken to the 112x112 canvas by nearest-neighbour resizing
# before the pixelwise OR / AND, so the two inputs always line up.

for mode in ("segmentation", "landmark", "union", "intersection"):
    region = maskops.region_map(mode, seg, lm)
    print(f"{mode:>13}: {region.shape}, {int(region.sum())} foreground pixels")

###############################################################################
# Stray specks do not survive: only the largest 8-connected component is
# kept before tracing.

noisy = maskops.normalize_mask(seg)
noisy[2, 2] = noisy[5, 100] = True
clean = maskops.largest_component(noisy)
print("removed", int(noisy.sum() - clean.sum()), "stray pixels")
