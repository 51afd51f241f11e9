"""Annotation renderings of the intermediate stages, for audit only."""
from pathlib import Path

import numpy as np

from .files import image_suffix, write_image
from .raster import as_rgb, draw_dot, draw_polygon, draw_segment, to_uint8

HULL = (255, 0, 0)
ANCHOR = (0, 255, 0)
CENTROID = (0, 0, 255)
FAN = (255, 255, 0)


def hull_overlay(image, hull):
    rgb = as_rgb(to_uint8(image))
    draw_polygon(rgb, hull, HULL)
    return rgb


def anchor_overlay(image, hull, anchors, center):
    rgb = hull_overlay(image, hull)
    for p in anchors:
        draw_dot(rgb, p, ANCHOR)
    draw_dot(rgb, center, CENTROID)
    return rgb


def fan_overlay(image, partition):
    rgb = as_rgb(to_uint8(image))
    c = partition.centroid
    draw_polygon(rgb, partition.ordered_anchors, FAN)
    for p in partition.ordered_anchors:
        draw_segment(rgb, c, p, FAN)
    draw_dot(rgb, partition.ordered_anchors[0], ANCHOR)
    draw_dot(rgb, c, CENTROID)
    return rgb


def dump_stages(out_dir, image_id, trace, canvas):
    """Write every intermediate of one pipeline run as ``<image_id>.<stage>.<ext>``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    img = trace["image"]
    files = {
        "mask": trace["mask"].astype(np.uint8) * 255,
        "hull": hull_overlay(img, trace["hull"]),
        "anchors": anchor_overlay(img, trace["hull"], trace["anchors"], trace["centroid"]),
        "fan": fan_overlay(img, trace["partition"]),
    }
    for k, patch in enumerate(trace["patches"]):
        files[f"patch{k:02d}"] = to_uint8(patch)
    files["canvas"] = canvas
    written = []
    for name, arr in files.items():
        path = out / f"{image_id}.{name}{image_suffix(arr)}"
        write_image(path, arr)
        written.append(path)
    return written
