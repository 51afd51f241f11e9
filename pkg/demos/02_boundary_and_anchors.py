"""
From mask to anchors
====================

Trace the outer boundary, wrap it in its convex hull, resample the hull at
200 equal arc-length steps and keep every 12.5th sample as one of 16 anchors.
"""

import numpy as np

from pawvit import geometry

# a lumpy blob: a disc with a bump on one side
ys, xs = np.mgrid[:112, :112] + 0.5
mask = np.hypot(xs - 52, ys - 58) <= 34
mask |= np.hypot(xs - 80, ys - 40) <= 14

contour = geometry.trace_boundary(mask)
hull = geometry.convex_hull(contour)
print(f"contour: {len(contour)} pixels, hull: {len(hull)} vertices")
print(f"hull area {geometry.polygon_area(hull):.1f}, perimeter {geometry.perimeter(hull):.2f}")

###############################################################################
# Resampling is uniform in arc length; consecutive samples on a straight hull
# edge are exactly perimeter/200 apart.

samples = geometry.resample_closed(hull, 200)
step = np.hypot(*np.diff(samples, axis=0).T)
print(f"sample spacing: min {step.min():.4f}, max {step.max():.4f}, "
      f"perimeter/200 = {geometry.perimeter(hull) / 200:.4f}")

###############################################################################
# The topmost sample is the reference; anchors are taken at rounded
# multiples of 200/16 from it.

samples, aset = geometry.anchor_set(hull)
print("reference sample:", aset.reference_index, samples[aset.reference_index])
print("anchor offsets:", geometry.anchor_offsets().tolist())
print("centroid:", np.round(aset.centroid, 3))
