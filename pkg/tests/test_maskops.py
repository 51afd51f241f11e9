from collections import deque
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pawvit.errors import DegenerateLandmarks, DimensionMismatch, EmptyImage, EmptyMask
from pawvit.maskops import (binarize, intersect, landmarks_to_mask, largest_component,
                            normalize_image, normalize_mask, region_map, union)


def flood_components(mask):
    """Oracle: BFS labeling with 8-connectivity; components in raster order of first pixel."""
    h, w = mask.shape
    seen = np.zeros_like(mask)
    comps = []
    for y in range(h):
        for x in range(w):
            if mask[y, x] and not seen[y, x]:
                comp = []
                queue = deque([(y, x)])
                seen[y, x] = True
                while queue:
                    cy, cx = queue.popleft()
                    comp.append((cy, cx))
                    for dy in (-1, 0, 1):
                        for dx in (-1, 0, 1):
                            ny, nx = cy + dy, cx + dx
                            if 0 <= ny < h and 0 <= nx < w and mask[ny, nx] and not seen[ny, nx]:
                                seen[ny, nx] = True
                                queue.append((ny, nx))
                comps.append(comp)
    return comps


masks_8 = arrays(bool, (8, 8))


def test_binarize_examples():
    assert not binarize(np.zeros((3, 4), np.uint8)).any()
    assert binarize(np.full((3, 4), 255, np.uint8)).all()
    assert binarize(np.array([[100, 200]], np.uint8)).tolist() == [[False, True]]
    assert binarize(np.array([[127, 128]], np.uint8)).tolist() == [[False, True]]


def test_binarize_rejects_colour():
    with pytest.raises(ValueError):
        binarize(np.zeros((2, 2, 3), np.uint8))


def test_normalize_mask_identity_on_target_size():
    rng = np.random.default_rng(0)
    m = rng.random((112, 112)) > 0.5
    assert np.array_equal(normalize_mask(m), m)


def test_normalize_mask_downsample_left_half():
    xs = np.arange(224)
    m = np.broadcast_to(xs < 112, (224, 224))
    out = normalize_mask(m)
    # oracle: per-pixel lookup of the source pixel containing the output center
    expected = np.zeros((112, 112), bool)
    for y in range(112):
        for x in range(112):
            expected[y, x] = m[int((y + 0.5) * 2), int((x + 0.5) * 2)]
    assert np.array_equal(out, expected)
    assert np.array_equal(out, np.broadcast_to(np.arange(112) < 56, (112, 112)))


def test_normalize_mask_upsample_constant():
    assert normalize_mask(np.ones((56, 56), bool)).all()


def test_normalize_mask_empty():
    with pytest.raises(EmptyMask):
        normalize_mask(np.zeros((50, 60), bool))


def test_normalize_image_ramp_endpoints():
    out = normalize_image(np.array([[0, 255]], np.uint8))
    assert out.shape == (112, 112)
    # oracle: closed-form bilinear at output centers, clamped to the two source centers
    pos = np.clip((np.arange(112) + 0.5) * 2 / 112 - 0.5, 0, 1)
    np.testing.assert_allclose(out[0], 255 * pos, atol=1e-12)
    assert out[0, 0] == 0 and out[0, -1] == 255
    assert np.all(np.diff(out[0]) >= 0)


def test_normalize_image_identity_and_constant():
    rng = np.random.default_rng(1)
    img = rng.integers(0, 256, (112, 112, 3), dtype=np.uint8)
    assert np.array_equal(normalize_image(img), img)
    const = np.full((37, 91), 100, np.uint8)
    np.testing.assert_array_equal(normalize_image(const), 100.0)
    assert normalize_image(np.full((20, 30, 3), 7, np.uint8)).shape == (112, 112, 3)


def test_normalize_image_empty():
    with pytest.raises(EmptyImage):
        normalize_image(np.zeros((0, 5)))


def test_union_intersect_examples():
    a = np.random.default_rng(2).random((112, 112)) > 0.5
    empty = np.zeros_like(a)
    full = np.ones_like(a)
    left = np.broadcast_to(np.arange(112) < 56, (112, 112))
    right = ~left
    assert np.array_equal(union(a, empty), a)
    assert np.array_equal(union(a, a), a)
    assert union(left, right).all()
    assert np.array_equal(intersect(a, full), a)
    assert not intersect(a, empty).any()
    assert not intersect(left, right).any()


def test_mismatched_shapes():
    with pytest.raises(DimensionMismatch):
        union(np.zeros((3, 3), bool), np.zeros((3, 4), bool))
    with pytest.raises(DimensionMismatch):
        intersect(np.zeros((3, 3), bool), np.zeros((4, 3), bool))


@settings(max_examples=60, deadline=None)
@given(masks_8, masks_8, masks_8)
def test_map_algebra_laws(a, b, c):
    assert np.array_equal(union(a, b), union(b, a))
    assert np.array_equal(intersect(a, b), intersect(b, a))
    assert np.array_equal(union(union(a, b), c), union(a, union(b, c)))
    assert np.array_equal(intersect(intersect(a, b), c), intersect(a, intersect(b, c)))
    assert np.array_equal(union(a, a), a) and np.array_equal(intersect(a, a), a)
    i, u = intersect(a, b), union(a, b)
    assert not (i & ~a).any() and not (a & ~u).any()


@settings(max_examples=30, deadline=None)
@given(arrays(bool, (112, 112)))
def test_normalize_mask_idempotent(m):
    if m.any():
        once = normalize_mask(m)
        assert np.array_equal(normalize_mask(once), once)


def test_landmark_square_fill():
    pts = [(10, 10), (100, 10), (100, 100), (10, 100)]
    m = landmarks_to_mask(pts, 112, 112)
    assert m.sum() == 91 * 91
    ys, xs = np.mgrid[0:112, 0:112]
    assert np.array_equal(m, (xs >= 10) & (xs <= 100) & (ys >= 10) & (ys <= 100))


def test_landmark_triangle_half_plane():
    m = landmarks_to_mask([(0, 0), (111, 0), (0, 111)], 112, 112)
    # landmarks name pixel centers: the oracle tests x/111 + y/111 <= 1 on pixel indices
    ys, xs = np.mgrid[0:112, 0:112]
    assert np.array_equal(m, xs / 111 + ys / 111 <= 1 + 1e-12)


def test_landmark_degenerate():
    with pytest.raises(DegenerateLandmarks):
        landmarks_to_mask([(1, 1), (5, 5), (9, 9)], 20, 20)
    with pytest.raises(DegenerateLandmarks):
        landmarks_to_mask([(1, 1), (1, 1), (4, 2)], 20, 20)
    with pytest.raises(DegenerateLandmarks):
        landmarks_to_mask([(1, 1), (4, 2)], 20, 20)


def test_landmark_points_outside_frame_are_clipped():
    m = landmarks_to_mask([(-20, -20), (200, -20), (200, 200), (-20, 200)], 30, 20)
    assert m.shape == (20, 30) and m.all()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 47), st.integers(0, 47)), min_size=3, max_size=12),
       st.randoms(use_true_random=False))
def test_landmark_fill_is_convex(points, rnd):
    try:
        m = landmarks_to_mask(points, 48, 48)
    except DegenerateLandmarks:
        return
    ys, xs = np.nonzero(m)
    on = list(zip(xs.tolist(), ys.tolist()))
    for _ in range(40):
        (x0, y0), (x1, y1) = rnd.choice(on), rnd.choice(on)
        dx, dy = x1 - x0, y1 - y0
        g = gcd(abs(dx), abs(dy)) or 1
        for k in range(g + 1):
            # pixel centers lying exactly on the segment
            assert m[y0 + k * dy // g, x0 + k * dx // g]


def test_largest_component_single_blob():
    m = np.zeros((10, 10), bool)
    m[2:5, 3:7] = True
    assert np.array_equal(largest_component(m), m)


def test_largest_component_keeps_bigger_blob():
    m = np.zeros((12, 12), bool)
    m[1:3, 1:6] = True          # 10 pixels
    m[8, 8:11] = True           # 3 pixels
    out = largest_component(m)
    comps = flood_components(m)
    biggest = max(comps, key=len)
    assert len(biggest) == 10
    expected = np.zeros_like(m)
    for y, x in biggest:
        expected[y, x] = True
    assert np.array_equal(out, expected)


def test_largest_component_tie_keeps_blob_nearer_origin():
    m = np.zeros((12, 12), bool)
    m[7, 6:11] = True           # 5 pixels, later in raster order
    m[2, 1:6] = True            # 5 pixels, nearer the origin
    out = largest_component(m)
    assert out[2, 1:6].all() and not out[7].any()


def test_largest_component_diagonal_connectivity():
    m = np.eye(6, dtype=bool)
    m[0, 5] = True
    out = largest_component(m)
    assert np.array_equal(out, np.eye(6, dtype=bool))


def test_largest_component_empty():
    with pytest.raises(EmptyMask):
        largest_component(np.zeros((4, 4), bool))


@settings(max_examples=60, deadline=None)
@given(arrays(bool, (10, 10)))
def test_largest_component_properties(m):
    if not m.any():
        return
    out = largest_component(m)
    assert not (out & ~m).any()
    assert len(flood_components(out)) == 1
    assert out.sum() == max(len(c) for c in flood_components(m))


def test_region_map_modes():
    seg = np.zeros((224, 224), bool)
    seg[20:120, 20:120] = True
    lm = np.zeros((224, 224), bool)
    lm[100:200, 100:200] = True
    s = region_map("segmentation", seg, None)
    l = region_map("landmark", None, lm)
    assert s.shape == l.shape == (112, 112)
    assert np.array_equal(region_map("union", seg, lm), s | l)
    assert np.array_equal(region_map("intersection", seg, lm), s & l)
    far = np.zeros((224, 224), bool)
    far[200:, 200:] = True
    with pytest.raises(EmptyMask):
        region_map("intersection", seg, far)
