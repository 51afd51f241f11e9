"""Command-line front end: ``warp``, ``maps``, ``eval`` and ``inspect``.

Exit status is 0 on success, 1 when any row (or the evaluation) failed and 2
for usage or configuration errors, which are detected before any output is
written.
"""
import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import files, maskops
from .config import PipelineConfig
from .errors import ConfigError, EmptyMask, ParseError, PawError
from .overlay import dump_stages
from .verification import EmbeddingSet, repeated_auc, roc_curve, score_pairs
from .warp import baseline_canvas, stage, warp_pipeline

log = logging.getLogger("pawvit")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

REQUIRED_INPUTS = {
    "segmentation": ("seg_mask_path",),
    "landmark": ("landmark_path",),
    "union": ("seg_mask_path", "landmark_path"),
    "intersection": ("seg_mask_path", "landmark_path"),
    "none": (),
}


def worker_count(requested=None):
    n = requested or os.cpu_count() or 1
    cap = os.environ.get("PAW_THREADS")
    if cap:
        try:
            n = min(n, max(int(cap), 1))
        except ValueError:
            raise ConfigError(f"PAW_THREADS must be an integer, got {cap!r}") from None
    return max(n, 1)


def _to_gray(arr):
    # colour masks count a pixel as set when any channel is set
    return arr if arr.ndim == 2 else arr.max(axis=2)


def load_region(row, mode, image_shape, threshold, landmark_cache):
    """Region map for one manifest row, normalized to the canvas size."""
    seg = lm = None
    if row.get("seg_mask_path") and mode in ("segmentation", "union", "intersection"):
        with stage("load"):
            seg = maskops.binarize(_to_gray(files.read_image(row["seg_mask_path"])), threshold)
    if row.get("landmark_path") and mode in ("landmark", "union", "intersection"):
        with stage("load"):
            path = row["landmark_path"]
            if path not in landmark_cache:
                landmark_cache[path] = files.read_landmarks(path)
            points = landmark_cache[path].get(row["image_id"])
            if points is None:
                raise ParseError(f"no landmarks for {row['image_id']!r} in {path}")
        with stage("landmarks"):
            h, w = image_shape[:2]
            lm = maskops.landmarks_to_mask(points, w, h)
    with stage("normalize"):
        return maskops.region_map(mode, seg, lm)


def _config_from_args(args):
    overrides = {k: getattr(args, k, None) for k in
                 ("samples", "anchors", "patch_size", "grid", "canvas", "threshold", "map_mode")}
    if args.config:
        return PipelineConfig.from_json(args.config, **overrides)
    return PipelineConfig(**{k: v for k, v in overrides.items() if v is not None})


def _check_inputs(rows, mode):
    for row in rows:
        missing = [c for c in REQUIRED_INPUTS[mode] if not row.get(c)]
        if missing:
            raise ConfigError(f"map mode {mode!r} needs {', '.join(missing)} "
                              f"(missing for row {row['image_id']!r})")


def _error_record(row, exc):
    return {"image_id": row["image_id"], "status": "error", "error": type(exc).__name__,
            "stage": getattr(exc, "stage", None), "message": str(exc)}


def _run_rows(rows, fn, threads, strict):
    """Apply ``fn`` to each row in a worker pool; yield results in manifest order.

    In strict mode iteration stops after the first failed row."""
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, row) for row in rows]
        for fut in futures:
            rec = fut.result()
            yield rec
            if strict and rec["status"] == "error":
                for f in futures:
                    f.cancel()
                return


def _write_log(out_dir, name, records):
    with open(Path(out_dir) / name, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def cmd_warp(args):
    cfg = _config_from_args(args)
    rows = files.read_manifest(args.manifest)
    _check_inputs(rows, cfg.map_mode)
    threads = worker_count(args.threads)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    landmark_cache = {}

    def process(row):
        try:
            with stage("load"):
                image = files.read_image(row["image_path"])
            if cfg.map_mode == "none":
                canvas, trace = baseline_canvas(image, cfg), None
            else:
                region = load_region(row, cfg.map_mode, image.shape, cfg.threshold, landmark_cache)
                trace = {} if args.dump_stages else None
                canvas = warp_pipeline(image, region, cfg, trace=trace)
        except (PawError, OSError, ValueError) as exc:
            log.error("%s: %s", row["image_id"], exc)
            return _error_record(row, exc)
        target = out_dir / f"{row['image_id']}.canvas{files.image_suffix(canvas.image)}"
        files.write_image(target, canvas.image)
        if trace is not None:
            dump_stages(out_dir / row["image_id"], row["image_id"], trace, canvas.image)
        log.info("%s: wrote %s", row["image_id"], target.name)
        return {"image_id": row["image_id"], "status": "ok", "output": target.name}

    records = list(_run_rows(rows, process, threads, args.strict))
    _write_log(out_dir, "warp_log.jsonl", records)
    failed = sum(r["status"] == "error" for r in records)
    log.info("warp: %d ok, %d failed", len(records) - failed, failed)
    return EXIT_FAILED if failed else EXIT_OK


def cmd_maps(args):
    if args.mode not in REQUIRED_INPUTS or args.mode == "none":
        raise ConfigError("maps mode must be segmentation, landmark, union or intersection")
    if not 0 <= args.threshold <= 255:
        raise ConfigError("threshold must lie in [0, 255]")
    rows = files.read_manifest(args.manifest)
    _check_inputs(rows, args.mode)
    threads = worker_count(args.threads)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    landmark_cache = {}

    def process(row):
        try:
            with stage("load"):
                image = files.read_image(row["image_path"])
            region = load_region(row, args.mode, image.shape, args.threshold, landmark_cache)
        except EmptyMask as exc:
            log.warning("%s: skipped, %s", row["image_id"], exc)
            rec = _error_record(row, exc)
            rec["status"] = "skipped"
            return rec
        except (PawError, OSError, ValueError) as exc:
            log.error("%s: %s", row["image_id"], exc)
            return _error_record(row, exc)
        target = out_dir / f"{row['image_id']}.{args.mode}.pgm"
        files.write_image(target, region)
        return {"image_id": row["image_id"], "status": "ok", "output": target.name}

    records = list(_run_rows(rows, process, threads, False))
    _write_log(out_dir, "maps_log.jsonl", records)
    return EXIT_FAILED if any(r["status"] == "error" for r in records) else EXIT_OK


def cmd_eval(args):
    if args.trials < 1:
        raise ConfigError("--trials must be at least 1")
    if args.cap is not None and args.cap < 1:
        raise ConfigError("--cap must be positive")
    similarity = "cosine" if args.cosine else "dot"
    try:
        emb = EmbeddingSet.from_records(files.read_embedding_records(args.embeddings))
        report = repeated_auc(emb, args.trials, args.cap, args.seed, similarity)
    except (PawError, OSError) as exc:
        log.error("eval: %s", exc)
        return EXIT_FAILED
    files.write_json(args.out, report.to_dict())
    if args.roc_csv:
        fpr, tpr = roc_curve(score_pairs(emb, args.cap, args.seed, similarity))
        with open(args.roc_csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["fpr", "tpr"])
            writer.writerows((repr(float(f)), repr(float(t))) for f, t in zip(fpr, tpr))
    log.info("eval: AUC %.4f +/- %.4f over %d trials", report.mean, report.half_width, report.trials)
    return EXIT_OK


def cmd_inspect(args):
    if args.map_mode is None and args.mask is None and args.landmarks:
        args.map_mode = "landmark"
    cfg = _config_from_args(args)
    if cfg.map_mode == "none":
        raise ConfigError("inspect needs a region map; map_mode 'none' has no stages")
    row = {"image_id": args.image_id, "image_path": args.image,
           "seg_mask_path": args.mask, "landmark_path": args.landmarks}
    _check_inputs([row], cfg.map_mode)
    try:
        with stage("load"):
            image = files.read_image(args.image)
        region = load_region(row, cfg.map_mode, image.shape, cfg.threshold, {})
        trace = {}
        canvas = warp_pipeline(image, region, cfg, trace=trace)
    except (PawError, OSError, ValueError) as exc:
        log.error("%s: %s", args.image_id, exc)
        return EXIT_FAILED
    for path in dump_stages(args.out_dir, args.image_id, trace, canvas.image):
        log.info("wrote %s", path)
    return EXIT_OK


def _add_geometry_flags(p):
    p.add_argument("--config", help="flat JSON config; flags override its values")
    p.add_argument("--map-mode", dest="map_mode", choices=maskops.MAP_MODES,
                   help="region map driving the warp (default segmentation)")
    p.add_argument("--threshold", type=int, help="mask binarization threshold (default 128)")
    p.add_argument("--samples", type=int, help="boundary samples on the hull (default 200)")
    p.add_argument("--anchors", type=int, help="fan anchors, must equal grid^2 (default 16)")
    p.add_argument("--patch-size", dest="patch_size", type=int, help="patch side in pixels (default 28)")
    p.add_argument("--grid", type=int, help="patches per canvas side (default 4)")
    p.add_argument("--canvas", type=int, help="canvas side in pixels (default 112)")


def build_parser():
    parser = argparse.ArgumentParser(prog="pawvit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log per-row progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("warp", help="warp every manifest row into a canvas")
    p.add_argument("--manifest", required=True,
                   help="CSV with header image_id,image_path,seg_mask_path,landmark_path,subject_id")
    p.add_argument("--out-dir", required=True)
    _add_geometry_flags(p)
    p.add_argument("--strict", action="store_true", help="stop at the first failed row")
    p.add_argument("--dump-stages", action="store_true",
                   help="also write every intermediate under <out-dir>/<image_id>/")
    p.add_argument("--threads", type=int, help="worker pool size (capped by PAW_THREADS)")
    p.set_defaults(func=cmd_warp)

    p = sub.add_parser("maps", help="write the combined 112x112 region map per row")
    p.add_argument("--manifest", required=True)
    p.add_argument("--mode", required=True, choices=maskops.MAP_MODES[:4])
    p.add_argument("--out-dir", required=True)
    p.add_argument("--threshold", type=int, default=128)
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_maps)

    p = sub.add_parser("eval", help="verification AUC over repeated impostor subsamples")
    p.add_argument("--embeddings", required=True,
                   help='JSON-lines of {"subject_id", "image_id", "embedding"}')
    p.add_argument("--out", required=True, help="report JSON path")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--cap", type=int, help="impostor pairs per trial (default: all)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--roc-csv", help="also write fpr,tpr rows for the first trial")
    p.add_argument("--cosine", action="store_true", help="length-normalize before the dot product")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("inspect", help="dump every stage for a single image")
    p.add_argument("--image", required=True)
    p.add_argument("--mask", help="segmentation mask image")
    p.add_argument("--landmarks", help="landmark JSON-lines file")
    p.add_argument("--image-id", default="image")
    p.add_argument("--out-dir", required=True)
    _add_geometry_flags(p)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ConfigError, ParseError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
