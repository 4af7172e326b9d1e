"""Semantic reduction of synthetic scene-classification rasters.

Builds six class-coded scenes spanning clear, mixed, and cloudy skies,
runs them through mask -> polygons / patch grid -> serialized artifacts,
and prints byte-exact reduction numbers plus the downlink time each
artifact would need at 50 Mbps.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from scipy import ndimage

from orbitload import link
from orbitload.cli import run as cli_run
from orbitload.raster import write_container

SIZE = 512
BAND_MULTIPLIER = 12  # raw acquisition carries many bands per class pixel


def synthetic_scene(rng: np.random.Generator, cloud_fraction: float) -> np.ndarray:
    """Class-coded raster: vegetation background, smoothly blobbed cloud."""
    classes = np.full((SIZE, SIZE), 4, np.uint8)  # vegetation
    classes[rng.random((SIZE, SIZE)) < 0.3] = 5  # bare ground speckle
    if cloud_fraction > 0:
        field = ndimage.gaussian_filter(rng.random((SIZE, SIZE)), 24)
        cut = np.quantile(field, 1.0 - cloud_fraction)
        cloud = field > cut
        classes[cloud] = 9  # cloud high probability
        cirrus = cloud & (rng.random((SIZE, SIZE)) < 0.15)
        classes[cirrus] = 10  # thin cirrus
    return classes


def main(out_dir: str | Path = "demo_output/eo") -> None:
    out_dir = Path(out_dir)
    scenes_dir = out_dir / "scenes"
    scenes_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(2025)

    fractions = [0.02, 0.07, 0.40, 0.55, 0.78, 0.85]
    paths = []
    for i, fraction in enumerate(fractions):
        classes = synthetic_scene(rng, fraction)
        path = write_container(
            scenes_dir / f"scene_{i:02d}.json",
            classes,
            class_semantics={"4": "vegetation", "5": "not_vegetated", "9": "cloud_high", "10": "thin_cirrus"},
            raw_byte_size=SIZE * SIZE * BAND_MULTIPLIER,
        )
        paths.append(str(path))

    artifacts = out_dir / "artifacts"
    code = cli_run(["eo-reduce", *paths, "--out-dir", str(artifacts)])
    print(f"eo-reduce exit code: {code}")

    print("\n=== per-scene reduction ===")
    print(f"{'scene':<10} {'cloud%':>7} {'regime':>11} {'deck%':>6} "
          f"{'patch B':>8} {'patch red%':>10} {'vector B':>9} {'vector red%':>11} {'t@50Mbps':>9}")
    for i in range(len(fractions)):
        doc = json.loads((artifacts / f"scene_{i:02d}_report.json").read_text())
        patch, vector = doc["patch"], doc["vector"]
        seconds = link.transfer_time(patch["artifact_bytes"], 50e6)
        print(
            f"scene_{i:02d}  {100 * patch['cloud_fraction']:>7.1f} {patch['regime']:>11} "
            f"{100 * patch['largest_deck_fraction']:>6.1f} {patch['artifact_bytes']:>8} "
            f"{patch['reduction_percent']:>10.4f} {vector['artifact_bytes']:>9} "
            f"{vector['reduction_percent']:>11.4f} {seconds * 1000:>8.2f}ms"
        )

    summary = json.loads((artifacts / "batch_summary.json").read_text())
    raw_total = sum(
        json.loads((artifacts / f"scene_{i:02d}_report.json").read_text())["patch"]["raw_bytes"]
        for i in range(len(fractions))
    )
    print(f"\nraw batch volume: {raw_total / 1e6:.2f} MB "
          f"(downlink {link.transfer_time(raw_total, 50e6):.2f} s at 50 Mbps)")
    for regime, stats in summary["patch"].items():
        print(
            f"  {regime:<11} scenes={stats['scene_count']} mean_cloud={stats['mean_cloud_fraction']:.2f} "
            f"mean_reduction={stats['mean_reduction_percent']:.3f}% artifact_total={stats['total_artifact_bytes']}B"
        )


if __name__ == "__main__":
    main()
