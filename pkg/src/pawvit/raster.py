"""Pixel-grid helpers shared by resizing, warping and the debug overlays.

Continuous coordinates put the center of pixel ``(x, y)`` at
``(x + 0.5, y + 0.5)``.
"""
import numpy as np


def sample_bilinear(image, xs, ys):
    """Bilinearly sample ``image`` at continuous coordinates, clamping to the edge.

    ``xs`` and ``ys`` broadcast together; the result has their shape plus the
    channel axis when the image has one. Output is float64.
    """
    img = np.asarray(image, dtype=np.float64)
    h, w = img.shape[:2]
    px = np.clip(np.asarray(xs, dtype=np.float64) - 0.5, 0.0, w - 1)
    py = np.clip(np.asarray(ys, dtype=np.float64) - 0.5, 0.0, h - 1)
    x0 = np.floor(px).astype(np.intp)
    y0 = np.floor(py).astype(np.intp)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = px - x0
    fy = py - y0
    if img.ndim == 3:
        fx = fx[..., None]
        fy = fy[..., None]
    top = img[y0, x0] * (1.0 - fx) + img[y0, x1] * fx
    bottom = img[y1, x0] * (1.0 - fx) + img[y1, x1] * fx
    return top * (1.0 - fy) + bottom * fy


def round_half_away(values):
    v = np.asarray(values, dtype=np.float64)
    return np.sign(v) * np.floor(np.abs(v) + 0.5)


def to_uint8(image):
    """Quantize real intensities to 8 bits, rounding half away from zero."""
    return np.clip(round_half_away(image), 0, 255).astype(np.uint8)


def pixel_centers(width, height):
    """Return ``(xs, ys)`` grids of pixel-center coordinates, shape ``(height, width)``."""
    return np.meshgrid(np.arange(width) + 0.5, np.arange(height) + 0.5)


# --- annotation drawing (debug overlays only) ---

def as_rgb(image):
    img = np.asarray(image)
    if img.dtype == bool:
        img = img.astype(np.uint8) * 255
    if img.ndim == 2:
        img = np.repeat(img[:, :, None], 3, axis=2)
    return np.array(img, dtype=np.uint8)


def draw_segment(rgb, p, q, color):
    h, w = rgb.shape[:2]
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    steps = int(np.ceil(2 * np.max(np.abs(q - p)))) + 1
    t = np.linspace(0.0, 1.0, steps)[:, None]
    pts = p + t * (q - p)
    xs = np.floor(pts[:, 0]).astype(int)
    ys = np.floor(pts[:, 1]).astype(int)
    ok = (xs >= 0) & (xs < w) & (ys >= 0) & (ys < h)
    rgb[ys[ok], xs[ok]] = color


def draw_polygon(rgb, vertices, color):
    v = np.asarray(vertices, dtype=float)
    for i in range(len(v)):
        draw_segment(rgb, v[i], v[(i + 1) % len(v)], color)


def draw_dot(rgb, p, color, radius=1):
    h, w = rgb.shape[:2]
    cx, cy = int(np.floor(p[0])), int(np.floor(p[1]))
    rgb[max(cy - radius, 0):min(cy + radius + 1, h), max(cx - radius, 0):min(cx + radius + 1, w)] = color
