"""Triangular fan around the anchor centroid and the quadrilaterals built from it."""
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateCentroid, DegenerateTriangle, DuplicateAnchors
from .geometry import EPS, cross


@dataclass(frozen=True)
class FanPartition:
    """Anchors ``P1..Pk`` in fan order around the centroid ``P0``.

    ``triangles`` and ``quads`` index into :attr:`points`, where row 0 is the
    centroid and row ``i`` is anchor ``Pi``.
    """
    ordered_anchors: np.ndarray
    centroid: np.ndarray
    triangles: np.ndarray
    quads: np.ndarray = None

    @property
    def points(self):
        return np.vstack([self.centroid[None, :], self.ordered_anchors])

    def triangle_vertices(self):
        return self.points[self.triangles]

    def quad_vertices(self):
        """``(k, 4, 2)`` array; each quad is ``(Pi, Pi+1, Pi+2, P0)``."""
        if self.quads is None:
            raise ValueError("quadrilaterals not paired yet")
        return self.points[self.quads]


def _segment_distance(p, a, b):
    ab = b - a
    t = np.clip(np.einsum("ij,ij->i", p - a, ab) / np.einsum("ij,ij->i", ab, ab), 0.0, 1.0)
    d = a + t[:, None] * ab - p
    return np.hypot(d[:, 0], d[:, 1])


def longest_diagonal(anchors):
    """Return ``(upper, lower)`` indices of the farthest-apart anchor pair.

    Within a pair the upper point has the smaller ``(y, x)``. Pairs whose
    length ties the maximum (relative 1e-9) are resolved by the smallest upper
    point, then the smallest lower point, both compared by ``(y, x)``.
    """
    a = np.asarray(anchors, dtype=np.float64)
    diff = a[:, None, :] - a[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    best = d2.max()
    ii, jj = np.nonzero(np.triu(d2 >= best - EPS * max(best, 1.0), k=1))

    def yx(i):
        return (a[i, 1], a[i, 0])

    candidates = []
    for i, j in zip(ii, jj):
        up, lo = (i, j) if yx(i) <= yx(j) else (j, i)
        candidates.append((yx(up), yx(lo), int(up), int(lo)))
    _, _, up, lo = min(candidates)
    return up, lo


def order_anchors(anchors, centroid):
    """Order anchors clockwise around the centroid, starting from the upper end
    of the longest diagonal.

    Ascending ``atan2(y - cy, x - cx)`` runs clockwise on screen because y points
    down. Equal angles fall back to smaller radius, then ``(y, x)``.
    """
    a = np.asarray(anchors, dtype=np.float64)
    c = np.asarray(centroid, dtype=np.float64)
    diff = a[:, None, :] - a[None, :, :]
    d = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(d, np.inf)
    if (d <= EPS).any():
        raise DuplicateAnchors("two or more anchors coincide")

    start, _ = longest_diagonal(a)
    rel = a - c
    radius = np.hypot(rel[:, 0], rel[:, 1])
    angle = np.arctan2(rel[:, 1], rel[:, 0])
    key = np.mod(angle - angle[start], 2 * np.pi)
    key[start] = -1.0
    order = np.lexsort((a[:, 0], a[:, 1], radius, key))
    ordered = a[order]

    on_edge = _segment_distance(np.repeat(c[None, :], len(ordered), axis=0),
                                ordered, np.roll(ordered, -1, axis=0))
    if on_edge.min() <= EPS:
        raise DegenerateCentroid("centroid lies on the anchor polygon boundary")
    return ordered


def twice_areas(points, triangles):
    v = np.asarray(points)[np.asarray(triangles)]
    return cross(v[:, 0], v[:, 1], v[:, 2])


def build_triangles(ordered_anchors, centroid):
    """Fan triangles ``(P0, Pi, Pi+1)`` for ``i = 1..k`` with indices wrapping mod k."""
    ordered = np.asarray(ordered_anchors, dtype=np.float64)
    c = np.asarray(centroid, dtype=np.float64)
    k = len(ordered)
    i = np.arange(1, k + 1)
    triangles = np.stack([np.zeros(k, dtype=int), i, i % k + 1], axis=1)
    part = FanPartition(ordered, c, triangles)
    areas = twice_areas(part.points, triangles)
    if np.abs(areas).min() <= EPS:
        bad = int(np.argmin(np.abs(areas)))
        raise DegenerateTriangle(f"fan triangle {bad + 1} has zero area")
    if not (np.all(areas > 0) or np.all(areas < 0)):
        raise DegenerateTriangle("fan triangles do not share one winding")
    return part


def pair_quadrilaterals(partition):
    """Pair each triangle with its clockwise successor.

    Quad ``i`` is ``(Pi, Pi+1, Pi+2, P0)``: triangles ``i`` and ``i+1`` glued
    along ``P0-Pi+1``. The window slides by one, so ``k`` triangles give ``k``
    quads and each triangle lands in two of them.
    """
    k = len(partition.ordered_anchors)
    i = np.arange(k)
    quads = np.stack([i % k + 1, (i + 1) % k + 1, (i + 2) % k + 1, np.zeros(k, dtype=int)], axis=1)
    return replace(partition, quads=quads)


def build_fan(anchors, centroid):
    return pair_quadrilaterals(build_triangles(order_anchors(anchors, centroid), centroid))
