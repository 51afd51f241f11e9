"""Binary region maps: binarization, resizing, map algebra and landmark fills.

A mask is a 2-D boolean numpy array indexed ``[y, x]``.
"""
import numpy as np
from scipy import ndimage

from .errors import (CollinearInput, DegenerateLandmarks, DimensionMismatch,
                     EmptyImage, EmptyMask)
from .geometry import EPS, convex_hull, signed_distance
from .raster import pixel_centers, sample_bilinear

CANVAS = 112
MAP_MODES = ("segmentation", "landmark", "union", "intersection", "none")


def binarize(image, threshold=128):
    img = np.asarray(image)
    if img.ndim != 2:
        raise ValueError(f"binarize expects a single-channel image, got shape {img.shape}")
    return img >= threshold


def _nearest_indices(n_in, n_out):
    # source pixel whose extent contains the output pixel center
    idx = np.floor((np.arange(n_out) + 0.5) * (n_in / n_out)).astype(np.intp)
    return np.minimum(idx, n_in - 1)


def normalize_mask(mask, size=CANVAS):
    """Nearest-neighbour resize of a mask to ``size x size``."""
    mask = np.asarray(mask, dtype=bool)
    if mask.size == 0 or not mask.any():
        raise EmptyMask("mask has no foreground pixels")
    h, w = mask.shape
    if (h, w) == (size, size):
        return mask.copy()
    out = mask[np.ix_(_nearest_indices(h, size), _nearest_indices(w, size))]
    if not out.any():
        raise EmptyMask("foreground vanished when resampling to %dx%d" % (size, size))
    return out


def normalize_image(image, width=CANVAS, height=CANVAS):
    """Bilinear resize to ``width x height``; returns float64 with channels preserved."""
    img = np.asarray(image)
    if img.size == 0 or img.ndim not in (2, 3):
        raise EmptyImage(f"cannot resize image of shape {img.shape}")
    h, w = img.shape[:2]
    if (h, w) == (height, width):
        return img.astype(np.float64)
    xs, ys = pixel_centers(width, height)
    return sample_bilinear(img, xs * (w / width), ys * (h / height))


def _check_same_shape(a, b):
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if a.shape != b.shape:
        raise DimensionMismatch(f"mask shapes differ: {a.shape} vs {b.shape}")
    return a, b


def union(a, b):
    a, b = _check_same_shape(a, b)
    return a | b


def intersect(a, b):
    a, b = _check_same_shape(a, b)
    return a & b


def landmarks_to_mask(points, width, height):
    """Fill the convex hull of landmark points given in pixel-index coordinates.

    A landmark at ``(i, j)`` denotes the center of pixel ``(i, j)``; pixels whose
    centers lie inside or on the hull are set.
    """
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if len(np.unique(pts, axis=0)) < 3:
        raise DegenerateLandmarks("need at least 3 distinct landmark points")
    try:
        hull = convex_hull(pts + 0.5)
    except CollinearInput:
        raise DegenerateLandmarks("landmark points are collinear") from None
    xs, ys = pixel_centers(width, height)
    mask = np.zeros((height, width), dtype=bool)
    # only test pixels inside the hull's bounding box
    lo = np.maximum(np.floor(hull.min(axis=0) - 1).astype(int), 0)
    hi = np.minimum(np.ceil(hull.max(axis=0) + 1).astype(int), [width, height])
    if np.any(hi <= lo):
        return mask
    box = (slice(lo[1], hi[1]), slice(lo[0], hi[0]))
    centers = np.stack([xs[box].ravel(), ys[box].ravel()], axis=1)
    inside = signed_distance(hull, centers) >= -EPS
    mask[box] = inside.reshape(xs[box].shape)
    return mask


def largest_component(mask):
    """Keep the largest 8-connected foreground component.

    Equal sizes resolve to the component whose first pixel comes earliest in
    row-major order.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise EmptyMask("mask has no foreground pixels")
    labels, n = ndimage.label(mask, structure=np.ones((3, 3), dtype=bool))
    if n == 1:
        return mask.copy()
    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    # ndimage numbers components in raster order of their first pixel
    return labels == int(np.argmax(sizes))


def region_map(mode, seg_mask=None, landmark_mask=None, size=CANVAS):
    """Build the normalized region map for one of the four map variants."""
    if mode == "segmentation":
        return normalize_mask(seg_mask, size)
    if mode == "landmark":
        return normalize_mask(landmark_mask, size)
    if mode in ("union", "intersection"):
        seg = normalize_mask(seg_mask, size)
        lm = normalize_mask(landmark_mask, size)
        out = union(seg, lm) if mode == "union" else intersect(seg, lm)
        if not out.any():
            raise EmptyMask(f"{mode} of segmentation and landmark maps is empty")
        return out
    raise ValueError(f"unknown map mode {mode!r}")
