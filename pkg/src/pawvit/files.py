"""Readers and writers for the on-disk formats.

Images are binary PGM (P5, one channel) or PPM (P6, three channels) with
8-bit samples. PNG goes through Pillow when it is installed. Landmarks and
embeddings are JSON-lines; the batch manifest is CSV.
"""
import csv
import json
import os
from pathlib import Path

import numpy as np

from .errors import ManifestParse, ParseError

PNM_EXTENSIONS = {".pgm", ".ppm", ".pnm"}
MANIFEST_COLUMNS = ("image_id", "image_path", "seg_mask_path", "landmark_path", "subject_id")


def _read_token(data, pos):
    """Return the next whitespace-delimited header token and the position after it."""
    n = len(data)
    while pos < n:
        c = data[pos:pos + 1]
        if c == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise ParseError("truncated PNM header")
    return data[start:pos], pos


def decode_pnm(data):
    magic, pos = _read_token(data, 0)
    if magic not in (b"P5", b"P6"):
        raise ParseError(f"unsupported PNM magic {magic!r}")
    fields = []
    for _ in range(3):
        tok, pos = _read_token(data, pos)
        try:
            fields.append(int(tok))
        except ValueError:
            raise ParseError(f"bad PNM header field {tok!r}") from None
    width, height, maxval = fields
    if width <= 0 or height <= 0:
        raise ParseError("PNM dimensions must be positive")
    if maxval != 255:
        raise ParseError(f"only 8-bit PNM is supported (maxval {maxval})")
    # exactly one whitespace byte separates the header from the raster
    pos += 1
    channels = 1 if magic == b"P5" else 3
    size = width * height * channels
    raster = data[pos:pos + size]
    if len(raster) != size:
        raise ParseError(f"PNM raster truncated: expected {size} bytes, got {len(raster)}")
    img = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, channels)
    return img[:, :, 0].copy() if channels == 1 else img.copy()


def encode_pnm(image):
    image = np.asarray(image)
    if image.dtype == bool:
        image = image.astype(np.uint8) * 255
    if image.dtype != np.uint8:
        raise ValueError(f"PNM output needs uint8 pixels, got {image.dtype}")
    if image.ndim == 2:
        magic = b"P5"
    elif image.ndim == 3 and image.shape[2] == 3:
        magic = b"P6"
    else:
        raise ValueError(f"cannot encode image of shape {image.shape} as PNM")
    h, w = image.shape[:2]
    return magic + b"\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(image).tobytes()


def read_image(path):
    """Load an 8-bit image as ``(H, W)`` or ``(H, W, 3)`` uint8."""
    path = Path(path)
    if path.suffix.lower() == ".png":
        from PIL import Image

        with Image.open(path) as im:
            if im.mode not in ("L", "RGB"):
                im = im.convert("RGB" if "A" in im.mode or im.mode == "P" else "L")
            return np.asarray(im, dtype=np.uint8).copy()
    return decode_pnm(path.read_bytes())


def write_image(path, image):
    path = Path(path)
    if path.suffix.lower() == ".png":
        from PIL import Image

        arr = np.asarray(image)
        if arr.dtype == bool:
            arr = arr.astype(np.uint8) * 255
        Image.fromarray(arr).save(path)
        return
    path.write_bytes(encode_pnm(image))


def image_suffix(image):
    return ".pgm" if np.asarray(image).ndim == 2 else ".ppm"


def _iter_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: {exc.msg}") from None


def read_landmarks(path):
    """Map image_id -> ``(K, 2)`` float array of landmark points."""
    out = {}
    for lineno, rec in _iter_jsonl(path):
        try:
            image_id = str(rec["image_id"])
            pts = np.asarray(rec["points"], dtype=float)
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"{path}:{lineno}: expected image_id and points") from None
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ParseError(f"{path}:{lineno}: points must be [[x, y], ...]")
        out[image_id] = pts
    return out


def read_embedding_records(path):
    """Return a list of ``(subject_id, image_id, vector)`` tuples in file order."""
    records = []
    for lineno, rec in _iter_jsonl(path):
        try:
            subject = str(rec["subject_id"])
            image_id = str(rec.get("image_id", lineno))
            vec = np.asarray(rec["embedding"], dtype=float)
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"{path}:{lineno}: expected subject_id and embedding") from None
        if vec.ndim != 1 or vec.size == 0:
            raise ParseError(f"{path}:{lineno}: embedding must be a non-empty list of numbers")
        records.append((subject, image_id, vec))
    return records


def read_manifest(path):
    """Parse the batch manifest. Empty cells become ``None``; relative paths
    resolve against the manifest's directory."""
    base = Path(path).parent
    rows = []
    seen = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "image_id" not in reader.fieldnames \
                or "image_path" not in reader.fieldnames:
            raise ManifestParse(f"{path}: header must include image_id and image_path")
        unknown = set(reader.fieldnames) - set(MANIFEST_COLUMNS)
        if unknown:
            raise ManifestParse(f"{path}: unknown columns {sorted(unknown)}")
        for lineno, raw in enumerate(reader, 2):
            row = {}
            for col in MANIFEST_COLUMNS:
                val = (raw.get(col) or "").strip()
                row[col] = val or None
            if row["image_id"] is None or row["image_path"] is None:
                raise ManifestParse(f"{path}:{lineno}: image_id and image_path are required")
            if row["image_id"] in seen:
                raise ManifestParse(f"{path}:{lineno}: duplicate image_id {row['image_id']!r}")
            if os.sep in row["image_id"] or row["image_id"] in (".", ".."):
                raise ManifestParse(f"{path}:{lineno}: image_id must be a plain name")
            seen.add(row["image_id"])
            for col in ("image_path", "seg_mask_path", "landmark_path"):
                if row[col] is not None:
                    row[col] = str(base / row[col])
            rows.append(row)
    return rows


def write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")
