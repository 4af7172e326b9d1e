"""Command-line entry point exposing every pipeline.

Subcommands: ``score``, ``eo-reduce``, ``depth-proxy``, ``simulate``,
``report``.  Exit codes: 0 success, 1 validation/usage error, 2 I/O
error.  All randomness derives from ``--seed``; identical invocations
produce bit-identical outputs.  Flag > config file > built-in default is
the configuration precedence, and the effective parameters are echoed
into every output under ``provenance``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, depth, eo, link, suitability
from ._fileio import atomic_write_bytes, atomic_write_json, pretty_json
from .config import config_hash, load_config
from .errors import CapacityError, EstimationError
from .raster import load_image_tile, load_scene_raster


class _CliParser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the documented contract is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _CliParser(prog="orbitload", description=__doc__)
    parser.add_argument("--version", action="version", version=f"orbitload {__version__}")
    parser.add_argument("--config", help="JSON config file overriding built-in defaults")
    sub = parser.add_subparsers(dest="command", parser_class=_CliParser)

    p = sub.add_parser("score", help="score a workload profile")
    p.add_argument("--profile", required=True, help="workload profile JSON file")
    p.add_argument("--weights", help="five comma-separated weights (default equal)")
    p.add_argument("--phase-fits", help="phase-fit registry JSON file")
    p.add_argument("--out", help="output JSON path (default stdout)")

    p = sub.add_parser("eo-reduce", help="class raster -> cloud artifacts + reduction report")
    p.add_argument("rasters", nargs="*", help="PGM files or container sidecars")
    p.add_argument("--manifest", help="scene manifest JSON (batch mode)")
    p.add_argument("--cloud-classes", default=None, help="comma-separated class codes")
    p.add_argument("--cell-size", type=int, default=None, help="patch cell size in pixels")
    p.add_argument("--threshold", type=float, default=None, help="patch cloudy-fraction threshold")
    p.add_argument(
        "--format", choices=["geojson", "compact"], default="compact",
        help="artifact encoding (byte accounting uses this encoding)",
    )
    p.add_argument("--holes", action="store_true", help="emit interior rings for mask holes")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("depth-proxy", help="stereo pair -> derived geometric products")
    p.add_argument("--reference", required=True, help="reference tile (PGM or container)")
    p.add_argument("--target", required=True, help="tile to align against the reference")
    p.add_argument("--max-keypoints", type=int, default=None)
    p.add_argument("--ratio", type=float, default=None, help="match ratio test")
    p.add_argument("--ransac-threshold", type=float, default=None, help="pixels")
    p.add_argument("--window", type=int, default=None, help="census window (odd)")
    p.add_argument("--max-disparity", type=int, default=None)
    p.add_argument("--min-abs-px", type=float, default=None, help="disparity magnitude filter")
    p.add_argument("--quant-bits", type=int, choices=[8, 16], default=None)
    p.add_argument("--stride", type=int, default=None, help="sparse point grid stride")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points-txt", action="store_true", help="also write x y d text points")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("simulate", help="store-and-forward transfer latency")
    p.add_argument("--plan", help="contact plan JSON file")
    p.add_argument("--rate", type=float, help="single always-open window at this rate (bps)")
    p.add_argument("--payload-bytes", type=int, required=True)
    p.add_argument("--artifact-bytes", type=int, help="adds a raw-vs-artifact comparison")
    p.add_argument("--ready-time", type=float, default=0.0)
    p.add_argument("--distance-km", type=float, help="adds one-way propagation delay")
    p.add_argument(
        "--medium", choices=[m.value for m in link.Medium], default=link.Medium.FIBER.value
    )
    p.add_argument("--report", help="output JSON path (default stdout)")

    p = sub.add_parser("report", help="merge run artifacts into one consolidated report")
    p.add_argument("--dir", required=True, help="directory holding prior subcommand outputs")
    p.add_argument("--out", help="output JSON path (default stdout)")
    p.add_argument("--csv", help="also write per-scene CSV rows here")

    return parser


def _provenance(cfg: dict, parameters: dict) -> dict:
    return {
        "toolkit_version": __version__,
        "config_hash": config_hash(cfg),
        "parameters": {k: sorted(v) if isinstance(v, (set, frozenset)) else v
                       for k, v in sorted(parameters.items())},
    }


def _emit(doc: dict, out: str | None) -> None:
    if out:
        atomic_write_json(Path(out), doc)
    else:
        sys.stdout.write(pretty_json(doc))


def _cmd_score(args, cfg) -> int:
    with open(args.profile, "rb") as fh:
        doc = json.load(fh)
    registry = (
        suitability.PhaseFitRegistry.from_file(args.phase_fits) if args.phase_fits else None
    )
    if "scores" in doc:
        scores = suitability.CriterionScores(**{k: int(v) for k, v in doc["scores"].items()})
        name = doc.get("name", "unnamed")
    else:
        profile = suitability.profile_from_json_dict(doc)
        scores = suitability.score_profile(profile, cfg)
        name = profile.name
    weights = None
    if args.weights:
        weights = [float(w) for w in args.weights.split(",")]
    elif cfg["suitability"]["weights"] != [0.2] * 5:
        weights = cfg["suitability"]["weights"]
    result = suitability.aggregate(
        scores,
        weights,
        tier1_min=cfg["suitability"]["tier1_min_average"],
        tier2_min=cfg["suitability"]["tier2_min_average"],
    )
    out_doc = {"workload": name, **result.to_json_dict()}
    try:
        fits = {
            phase.value: suitability.phase_fit(name, phase, registry).value
            for phase in suitability.Phase
        }
        out_doc["phase_fits"] = fits
    except KeyError:
        pass  # profile name not in the roadmap registry
    out_doc["provenance"] = _provenance(cfg, {"profile": Path(args.profile).name, "weights": weights})
    _emit(out_doc, args.out)
    return 0


def _scene_paths(args) -> list[Path]:
    paths = [Path(r) for r in args.rasters]
    if args.manifest:
        with open(args.manifest, "rb") as fh:
            manifest = json.load(fh)
        base = Path(args.manifest).parent
        for scene in manifest["scenes"]:
            paths.append(base / scene["container"])
    if not paths:
        raise ValueError("eo-reduce needs raster paths or --manifest")
    return paths


def _cmd_eo_reduce(args, cfg) -> int:
    eo_cfg = cfg["eo"]
    cloud_classes = (
        frozenset(int(c) for c in args.cloud_classes.split(","))
        if args.cloud_classes
        else frozenset(eo_cfg["cloud_classes"])
    )
    cell_size = args.cell_size if args.cell_size is not None else eo_cfg["cell_size_px"]
    threshold = args.threshold if args.threshold is not None else eo_cfg["patch_threshold"]
    fmt = eo.ArtifactFormat(args.format)
    connectivity = eo_cfg["connectivity"]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = "geojson" if fmt is eo.ArtifactFormat.GEOJSON_TEXT else "bin"

    params = {
        "cloud_classes": cloud_classes,
        "cell_size_px": cell_size,
        "threshold": threshold,
        "format": fmt.value,
        "holes": args.holes,
    }
    patch_reports: list[eo.ReductionReport] = []
    vector_reports: list[eo.ReductionReport] = []
    for path in _scene_paths(args):
        raster = load_scene_raster(path)
        mask = eo.derive_cloud_mask(raster, cloud_classes)
        polygons = eo.extract_contours(mask, connectivity, include_holes=args.holes)
        grid = eo.patch_polygons(mask, cell_size, threshold)
        stem = path.stem
        eo.write_artifact(out_dir / f"{stem}_polygons.{ext}", polygons, fmt)
        eo.write_artifact(out_dir / f"{stem}_patches.{ext}", grid, fmt)
        vec_report = eo.reduction_report(
            raster, polygons.serialized_bytes, mask,
            connectivity=connectivity, regime_bounds=eo_cfg["regimes"],
        )
        patch_report = eo.reduction_report(
            raster, grid.serialized_bytes, mask, patch_count=grid.patch_count,
            connectivity=connectivity, regime_bounds=eo_cfg["regimes"],
        )
        vector_reports.append(vec_report)
        patch_reports.append(patch_report)
        atomic_write_json(
            out_dir / f"{stem}_report.json",
            {
                "kind": "eo_reduction_report",
                "scene": stem,
                "patch": patch_report.to_json_dict(),
                "vector": vec_report.to_json_dict(),
                "provenance": _provenance(cfg, {**params, "raster": path.name}),
            },
        )
    if len(patch_reports) > 1:
        atomic_write_json(
            out_dir / "batch_summary.json",
            {
                "kind": "eo_batch_summary",
                "patch": {
                    regime.value: summary.to_json_dict()
                    for regime, summary in eo.batch_summary(patch_reports).items()
                },
                "vector": {
                    regime.value: summary.to_json_dict()
                    for regime, summary in eo.batch_summary(vector_reports).items()
                },
                "provenance": _provenance(cfg, params),
            },
        )
    return 0


def _cmd_depth_proxy(args, cfg) -> int:
    d = cfg["depth"]
    max_kp = args.max_keypoints if args.max_keypoints is not None else d["max_keypoints"]
    ratio = args.ratio if args.ratio is not None else d["match_ratio"]
    ransac_t = args.ransac_threshold if args.ransac_threshold is not None else d["ransac_threshold_px"]
    window = args.window if args.window is not None else d["window_px"]
    max_disp = args.max_disparity if args.max_disparity is not None else d["max_disparity"]
    min_abs = args.min_abs_px if args.min_abs_px is not None else d["min_abs_px"]
    quant = args.quant_bits if args.quant_bits is not None else d["quantization_bits"]
    stride = args.stride if args.stride is not None else d["sparse_stride"]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    reference = depth.normalize_radiometric(load_image_tile(args.reference))
    target = depth.normalize_radiometric(load_image_tile(args.target))
    feats_ref = depth.detect_features(reference, max_kp, seed=d["descriptor_seed"])
    feats_tgt = depth.detect_features(target, max_kp, seed=d["descriptor_seed"])
    matches = depth.match_features(feats_ref, feats_tgt, ratio)
    if len(matches) < 4:
        raise EstimationError(f"only {len(matches)} matches; cannot estimate geometry")
    src = np.array([[feats_ref[m.index_a].keypoint.x, feats_ref[m.index_a].keypoint.y] for m in matches])
    dst = np.array([[feats_tgt[m.index_b].keypoint.x, feats_tgt[m.index_b].keypoint.y] for m in matches])
    model = depth.estimate_geometry(
        src, dst, threshold_px=ransac_t,
        max_iterations=d["ransac_max_iterations"], seed=args.seed,
        confidence=d["ransac_confidence"],
    )
    aligned = depth.warp_align(target, model)
    dmap = depth.compute_disparity(reference, aligned, window, max_disp)
    filtered, coverage = depth.filter_disparity(dmap, min_abs)
    products = depth.package_products(filtered, model, quant, stride)
    atomic_write_bytes(out_dir / "products.oldp", products.payload)
    if args.points_txt:
        lines = "".join(
            f"{int(x)} {int(y)} {d_:.4f}\n" for x, y, d_ in products.sparse_points
        )
        atomic_write_bytes(out_dir / "points.txt", lines.encode("ascii"))
    raw_bytes = (reference.source_bytes or 0) + (target.source_bytes or 0)
    report = {
        "kind": "depth_proxy_report",
        "keypoints": {"reference": len(feats_ref), "target": len(feats_tgt)},
        "matches": len(matches),
        "model": model.to_json_dict(),
        "coverage_after_filter": coverage,
        "coverage_before_filter": dmap.coverage,
        "raw_bytes": raw_bytes,
        "derived_bytes": products.total_bytes,
        "reduction_percent": depth.reduction_percent(raw_bytes, products.total_bytes),
        "provenance": _provenance(cfg, {
            "reference": Path(args.reference).name, "target": Path(args.target).name,
            "max_keypoints": max_kp, "ratio": ratio, "ransac_threshold": ransac_t,
            "window": window, "max_disparity": max_disp, "min_abs_px": min_abs,
            "quant_bits": quant, "stride": stride, "seed": args.seed,
        }),
    }
    atomic_write_json(out_dir / "depth_report.json", report)
    return 0


def _cmd_simulate(args, cfg) -> int:
    if args.payload_bytes <= 0:
        raise ValueError("--payload-bytes must be > 0")
    if args.plan:
        plan = link.load_plan(args.plan)
    elif args.rate:
        if args.rate <= 0:
            raise ValueError("--rate must be > 0")
        # One window long enough for any payload given here.
        need_s = (args.payload_bytes + (args.artifact_bytes or 0)) * 8.0 / args.rate
        plan = [link.ContactWindow(0.0, args.ready_time + need_s + 1.0, args.rate)]
    else:
        raise ValueError("simulate needs --plan or --rate")
    propagation = None
    if args.distance_km is not None:
        propagation = link.PropagationParams(args.distance_km, link.Medium(args.medium))
    params = {
        "payload_bytes": args.payload_bytes,
        "artifact_bytes": args.artifact_bytes,
        "ready_time": args.ready_time,
        "plan": Path(args.plan).name if args.plan else None,
        "rate": args.rate,
        "distance_km": args.distance_km,
        "medium": args.medium,
    }
    if args.artifact_bytes:
        comparison = link.compare_raw_vs_semantic(
            args.payload_bytes, args.artifact_bytes, plan,
            ready_time_s=args.ready_time, propagation=propagation,
        )
        doc = {"kind": "link_comparison", **comparison.to_json_dict()}
    else:
        result = link.schedule_transfer(
            link.TransferJob(args.payload_bytes, args.ready_time), plan
        )
        doc = {"kind": "link_transfer", "payload_bytes": args.payload_bytes,
               **result.to_json_dict()}
        if propagation is not None:
            delay = link.propagation_delay(propagation)
            doc["propagation_delay_s"] = delay
            doc["total_latency_s"] = result.latency_s + delay
    doc["provenance"] = _provenance(cfg, params)
    _emit(doc, args.report)
    return 0


def _cmd_report(args, cfg) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        raise OSError(f"{root} is not a directory")
    sections: dict[str, list] = {
        "eo_reduction_report": [], "eo_batch_summary": [],
        "depth_proxy_report": [], "link_comparison": [],
        "link_transfer": [], "suitability": [],
    }
    warnings: list[str] = []
    for path in sorted(root.rglob("*.json")):
        try:
            with open(path, "rb") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            warnings.append(f"{path.name}: {exc}")
            continue
        if not isinstance(doc, dict):
            continue
        kind = doc.get("kind")
        if kind is None and "tier" in doc and "scores" in doc:
            kind = "suitability"
        if kind in sections:
            sections[kind].append({"file": str(path.relative_to(root)), "data": doc})
    eo_reports = [
        eo.ReductionReport.from_json_dict(entry["data"]["patch"])
        for entry in sections["eo_reduction_report"]
    ]
    merged = {
        "kind": "consolidated_report",
        "sections": {k: v for k, v in sections.items() if v},
        "eo_regime_summary": {
            regime.value: summary.to_json_dict()
            for regime, summary in eo.batch_summary(eo_reports).items()
        },
        "warnings": warnings,
        "provenance": _provenance(cfg, {}),
    }
    if not any(sections.values()):
        warnings.append("no recognized artifacts found")
    _emit(merged, args.out)
    if args.csv:
        rows = ["scene,regime,cloud_fraction,raw_bytes,artifact_bytes,reduction_percent"]
        for entry in sections["eo_reduction_report"]:
            data = entry["data"]
            patch = data["patch"]
            rows.append(
                f"{data['scene']},{patch['regime']},{patch['cloud_fraction']:.6f},"
                f"{patch['raw_bytes']},{patch['artifact_bytes']},{patch['reduction_percent']:.4f}"
            )
        atomic_write_bytes(Path(args.csv), ("\n".join(rows) + "\n").encode("utf-8"))
    return 0


_COMMANDS = {
    "score": _cmd_score,
    "eo-reduce": _cmd_eo_reduce,
    "depth-proxy": _cmd_depth_proxy,
    "simulate": _cmd_simulate,
    "report": _cmd_report,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        cfg = load_config(args.config)
        return _COMMANDS[args.command](args, cfg)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"orbitload {args.command}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError, CapacityError, EstimationError) as exc:
        print(f"orbitload {args.command}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
