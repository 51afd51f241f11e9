"""
Fan, quads and the canvas
=========================

The 16 anchors and their centroid give a triangle fan. Neighbouring triangles
pair into quadrilaterals, each warped onto a 28x28 square; the 16 squares are
stitched row by row into the 112x112 canvas.
"""

import tempfile
from pathlib import Path

import numpy as np

from pawvit import files, geometry, maskops, warp
from pawvit.fan import build_fan, twice_areas
from pawvit.overlay import dump_stages

ys, xs = np.mgrid[:140, :120] + 0.5
mask = ((xs - 60) / 42) ** 2 + ((ys - 72) / 60) ** 2 <= 1
image = (((xs // 10 + ys // 10) % 2) * 180 + 40).astype(np.uint8)

region = maskops.normalize_mask(mask)
_, aset = geometry.anchor_set(geometry.convex_hull(geometry.trace_boundary(region)))
part = build_fan(aset.anchors, aset.centroid)
areas = twice_areas(part.points, part.triangles) / 2
print("triangle areas:", np.round(areas, 1).tolist())
print(f"sum {areas.sum():.6f} vs polygon {geometry.polygon_area(part.ordered_anchors):.6f}")
print("first quads (row 0 is the centroid):", part.quads[:3].tolist())

###############################################################################
# One quad onto the square: its two triangles land on the corners
# (A, B, D) and (B, C, D).

q = part.quad_vertices()[0]
maps = warp.quad_maps(q, 28)
print("forward map of first triangle:\n", np.round(warp.apply_affine(maps.forward_first, q[[0, 1, 3]]), 9))

###############################################################################
# The whole pipeline, with every intermediate written out for a look.

trace = {}
canvas = warp.warp_pipeline(image, mask, trace=trace)
out = Path(tempfile.mkdtemp(prefix="pawvit-demo-"))
written = dump_stages(out, "demo", trace, canvas.image)
print(f"canvas {canvas.image.shape}, {len(written)} files in {out}")
files.write_image(out / "demo.input.pgm", image)
