"""Piecewise-affine warping of fan quadrilaterals into square patches, and the
end-to-end pipeline that stitches them into the canvas."""
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from . import fan, geometry, maskops
from .config import PipelineConfig
from .errors import CollinearSource, DegenerateTriangle, PawError, WrongPatchCount, WrongPatchSize
from .geometry import EPS, cross
from .raster import pixel_centers, sample_bilinear, to_uint8


@dataclass(frozen=True)
class WarpedCanvas:
    image: np.ndarray       # (canvas, canvas) or (canvas, canvas, 3) uint8
    patch_order: tuple      # quad index placed at each grid slot, row-major


@dataclass(frozen=True)
class QuadMaps:
    """The two triangle maps of one quad. ``forward_*`` send source to square,
    ``inverse_*`` square to source."""
    forward_first: np.ndarray
    forward_second: np.ndarray
    inverse_first: np.ndarray
    inverse_second: np.ndarray


def solve_affine(src, dst):
    """2x3 matrix ``M`` with ``M @ [x, y, 1] = dst_i`` for the three ``src_i``."""
    src = np.asarray(src, dtype=np.float64).reshape(3, 2)
    dst = np.asarray(dst, dtype=np.float64).reshape(3, 2)
    if abs(cross(src[0], src[1], src[2])) <= EPS:
        raise CollinearSource("source triangle is degenerate")
    a = np.hstack([src, np.ones((3, 1))])
    return np.linalg.solve(a, dst).T


def apply_affine(m, points):
    pts = np.asarray(points, dtype=np.float64)
    return pts @ m[:, :2].T + m[:, 2]


def square_corners(size):
    """Pixel-center corners A, B, C, D of a ``size`` patch, clockwise from top-left."""
    lo, hi = 0.5, size - 0.5
    return np.array([[lo, lo], [hi, lo], [hi, hi], [lo, hi]])


def quad_maps(quad, size):
    """Triangle maps for quad ``(Pi, Pi+1, Pi+2, P0)`` onto the square ``A B C D``.

    ``(Pi, Pi+1, P0) -> (A, B, D)`` and ``(Pi+1, Pi+2, P0) -> (B, C, D)``, so the
    shared edge ``P0-Pi+1`` lands on the diagonal ``D-B``.
    """
    q = np.asarray(quad, dtype=np.float64)
    a, b, c, d = square_corners(size)
    first_src = q[[0, 1, 3]]
    second_src = q[[1, 2, 3]]
    first_dst = np.array([a, b, d])
    second_dst = np.array([b, c, d])
    for tri in (first_src, second_src):
        if abs(cross(tri[0], tri[1], tri[2])) <= EPS:
            raise DegenerateTriangle("quad contains a zero-area triangle")
    return QuadMaps(
        solve_affine(first_src, first_dst),
        solve_affine(second_src, second_dst),
        solve_affine(first_dst, first_src),
        solve_affine(second_dst, second_src),
    )


def first_triangle_mask(size):
    """Pixels on or above the D-B diagonal belong to the first triangle."""
    cols, rows = np.meshgrid(np.arange(size), np.arange(size))
    return cols + rows <= size - 1 + EPS


def source_coordinates(quad, size):
    """Continuous source location sampled for every patch pixel, ``(size, size, 2)``."""
    maps = quad_maps(quad, size)
    xs, ys = pixel_centers(size, size)
    centers = np.stack([xs, ys], axis=-1)
    first = first_triangle_mask(size)
    return np.where(first[..., None],
                    apply_affine(maps.inverse_first, centers),
                    apply_affine(maps.inverse_second, centers))


def warp_quad_to_patch(image, quad, size=28):
    """Warp one quad of ``image`` into a ``size x size`` float patch."""
    src = source_coordinates(quad, size)
    return sample_bilinear(image, src[..., 0], src[..., 1])


def stitch(patches, grid=4):
    """Place ``grid**2`` square patches row-major into one canvas."""
    patches = [np.asarray(p) for p in patches]
    if len(patches) != grid * grid:
        raise WrongPatchCount(f"expected {grid * grid} patches, got {len(patches)}")
    shape = patches[0].shape
    if len(shape) < 2 or shape[0] != shape[1] or any(p.shape != shape for p in patches):
        raise WrongPatchSize("patches must be square and share one shape")
    rows = [np.concatenate(patches[r * grid:(r + 1) * grid], axis=1) for r in range(grid)]
    return np.concatenate(rows, axis=0)


def slice_patches(canvas, grid=4):
    canvas = np.asarray(canvas)
    s = canvas.shape[0] // grid
    return [canvas[r * s:(r + 1) * s, c * s:(c + 1) * s].copy()
            for r in range(grid) for c in range(grid)]


@contextmanager
def stage(name):
    """Tag any pipeline error escaping the block with the stage name."""
    try:
        yield
    except PawError as exc:
        if exc.stage is None:
            exc.stage = name
        raise


def warp_pipeline(image, mask, config=None, threads=1, trace=None):
    """Image + region mask -> :class:`WarpedCanvas`.

    ``trace``, when a dict, receives every intermediate (normalized mask, hull,
    samples, anchors, fan, float patches) for stage dumps.
    """
    cfg = config or PipelineConfig()
    with stage("normalize"):
        img = maskops.normalize_image(image, cfg.canvas, cfg.canvas)
        region = maskops.normalize_mask(mask, cfg.canvas)
    with stage("largest_component"):
        region = maskops.largest_component(region)
    with stage("trace_boundary"):
        contour = geometry.trace_boundary(region)
    with stage("convex_hull"):
        hull = geometry.convex_hull(contour)
    with stage("resample"):
        samples = geometry.resample_closed(hull, cfg.samples)
    with stage("canonical_reference"):
        ref = geometry.canonical_reference(samples)
    with stage("select_anchors"):
        anchors, anchor_idx = geometry.select_anchors(samples, ref, cfg.anchors)
        center = geometry.centroid(anchors)
    with stage("order_anchors"):
        ordered = fan.order_anchors(anchors, center)
    with stage("build_triangles"):
        partition = fan.build_triangles(ordered, center)
    with stage("pair_quadrilaterals"):
        partition = fan.pair_quadrilaterals(partition)
    quads = partition.quad_vertices()
    with stage("warp"):
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                patches = list(pool.map(lambda q: warp_quad_to_patch(img, q, cfg.patch_size), quads))
        else:
            patches = [warp_quad_to_patch(img, q, cfg.patch_size) for q in quads]
    with stage("stitch"):
        canvas = to_uint8(stitch(patches, cfg.grid))
    if trace is not None:
        trace.update(image=img, mask=region, contour=contour, hull=hull, samples=samples,
                     reference_index=ref, anchors=anchors, anchor_indices=anchor_idx,
                     centroid=center, partition=partition, patches=patches)
    return WarpedCanvas(canvas, tuple(range(len(patches))))


def baseline_canvas(image, config=None):
    """No-map baseline: plain bilinear resize to the canvas size."""
    cfg = config or PipelineConfig()
    with stage("normalize"):
        return WarpedCanvas(to_uint8(maskops.normalize_image(image, cfg.canvas, cfg.canvas)), ())
