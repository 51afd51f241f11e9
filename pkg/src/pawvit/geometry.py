"""Boundary geometry: contour tracing, convex hull, uniform resampling, anchors.

Points are ``(x, y)`` rows in continuous image coordinates with y pointing
down. Polygons are ``(K, 2)`` float arrays ordered clockwise as seen on
screen, which makes the usual cross product ``(b - a) x (c - b)`` positive at
every turn and the shoelace sum positive.
"""
from dataclasses import dataclass

import numpy as np

from .errors import CollinearInput, DegenerateRegion, EmptyMask, ZeroPerimeter

EPS = 1e-9
N_SAMPLES = 200
N_ANCHORS = 16

# Moore neighbourhood as (dx, dy), in clockwise screen order starting west.
_MOORE = ((-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1))
_MOORE_INDEX = {d: i for i, d in enumerate(_MOORE)}


@dataclass(frozen=True)
class AnchorSet:
    anchors: np.ndarray          # (16, 2), P1..P16 in sample order
    centroid: np.ndarray         # (2,), P0
    reference_index: int         # canonical sample the stepping starts from
    sample_indices: np.ndarray   # which of the resampled points became anchors


def cross(o, a, b):
    return (a[..., 0] - o[..., 0]) * (b[..., 1] - o[..., 1]) - \
        (a[..., 1] - o[..., 1]) * (b[..., 0] - o[..., 0])


def trace_boundary(mask):
    """Trace the outer boundary of the foreground region with Moore-neighbour tracing.

    Tracing starts at the first foreground pixel in row-major order and stops
    when it is back at the start pixel about to repeat its first move. Returns
    pixel centers, shape ``(K, 2)``, clockwise on screen.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise EmptyMask("mask has no foreground pixels")
    grid = np.pad(mask, 1, constant_values=False)
    ys, xs = np.nonzero(grid)
    start = (int(xs[0]), int(ys[0]))

    contour = []
    p, b = start, (start[0] - 1, start[1])  # west of the raster-first pixel is background
    second = None
    limit = 8 * int(mask.sum()) + 16
    for _ in range(limit):
        contour.append(p)
        k = _MOORE_INDEX[(b[0] - p[0], b[1] - p[1])]
        prev = b
        for i in range(1, 9):
            dx, dy = _MOORE[(k + i) % 8]
            c = (p[0] + dx, p[1] + dy)
            if grid[c[1], c[0]]:
                break
            prev = c
        else:
            break  # isolated pixel
        if second is None:
            second = c
        elif p == start and c == second:
            contour.pop()
            break
        p, b = c, prev
    pts = np.asarray(contour, dtype=np.float64) - 1.0 + 0.5
    if len(np.unique(pts, axis=0)) < 3:
        raise DegenerateRegion(f"boundary has only {len(np.unique(pts, axis=0))} distinct pixels")
    return pts


def convex_hull(points):
    """Monotone-chain convex hull, clockwise on screen, collinear points dropped.

    The first vertex is the lexicographically smallest ``(x, y)`` point.
    """
    pts = np.unique(np.asarray(points, dtype=np.float64).reshape(-1, 2), axis=0)
    if len(pts) < 3:
        raise CollinearInput("need at least 3 distinct points")
    pts = [tuple(p) for p in pts]  # np.unique sorts by x then y

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], p) <= EPS:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], p) <= EPS:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise CollinearInput("points are collinear")
    return np.asarray(hull, dtype=np.float64)


def signed_distance(polygon, points):
    """Distance from each point to the boundary of a clockwise convex polygon,
    positive inside, negative outside (exact inside, sign-correct outside)."""
    poly = np.asarray(polygon, dtype=np.float64)
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    a = poly
    b = np.roll(poly, -1, axis=0)
    edge = b - a
    length = np.hypot(edge[:, 0], edge[:, 1])
    rel = pts[:, None, :] - a[None, :, :]
    c = edge[None, :, 0] * rel[..., 1] - edge[None, :, 1] * rel[..., 0]
    return (c / length[None, :]).min(axis=1)


def signed_area(vertices):
    v = np.asarray(vertices, dtype=np.float64)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def polygon_area(vertices):
    """Absolute shoelace area."""
    return abs(signed_area(vertices))


def perimeter(vertices):
    v = np.asarray(vertices, dtype=np.float64)
    d = np.roll(v, -1, axis=0) - v
    return float(np.hypot(d[:, 0], d[:, 1]).sum())


def resample_closed(polygon, n=N_SAMPLES):
    """Place ``n`` points at equal arc-length steps around a closed polygon,
    starting at its first vertex."""
    v = np.asarray(polygon, dtype=np.float64)
    d = np.roll(v, -1, axis=0) - v
    lengths = np.hypot(d[:, 0], d[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    total = cum[-1]
    if not total > EPS:
        raise ZeroPerimeter("polygon perimeter is zero")
    t = np.arange(n) * (total / n)
    edge = np.clip(np.searchsorted(cum, t, side="right") - 1, 0, len(v) - 1)
    unit = d[edge] / lengths[edge][:, None]
    return v[edge] + (t - cum[edge])[:, None] * unit


def canonical_reference(samples):
    """Index of the topmost sample: minimum y, then minimum x, then first index."""
    s = np.asarray(samples, dtype=np.float64)
    return int(np.lexsort((np.arange(len(s)), s[:, 0], s[:, 1]))[0])


def anchor_offsets(n_samples=N_SAMPLES, n_anchors=N_ANCHORS):
    """``round(i * n_samples / n_anchors)`` with halves rounded up, in exact integer math."""
    i = np.arange(n_anchors)
    return (2 * i * n_samples + n_anchors) // (2 * n_anchors)


def select_anchors(samples, reference, n_anchors=N_ANCHORS):
    s = np.asarray(samples, dtype=np.float64)
    idx = (reference + anchor_offsets(len(s), n_anchors)) % len(s)
    return s[idx].copy(), idx


def centroid(anchors):
    return np.asarray(anchors, dtype=np.float64).mean(axis=0)


def anchor_set(polygon, n_samples=N_SAMPLES, n_anchors=N_ANCHORS):
    """Resample a hull, fix the canonical reference and pick the anchors."""
    samples = resample_closed(polygon, n_samples)
    ref = canonical_reference(samples)
    anchors, idx = select_anchors(samples, ref, n_anchors)
    return samples, AnchorSet(anchors, centroid(anchors), ref, idx)
