"""Acceptance suite: one test per release criterion, at stated tolerances.

Each test prints an ``ACCEPTANCE <name>: PASS/FAIL`` line via the
terminal-summary hook in conftest.  Run with ``pytest tests/test_acceptance.py -v``.
"""

from __future__ import annotations

import subprocess
import sys
import time
from collections import deque
from hashlib import sha256
from pathlib import Path

import numpy as np
import pytest
from scipy import ndimage

from conftest import textured_pair
from orbitload import depth, eo, link
from orbitload import suitability as suit
from orbitload.errors import CapacityError
from orbitload.raster import SceneRaster

REPO_ROOT = Path(__file__).resolve().parent.parent


def test_suitability_matrix_reproduction():
    """All 8 matrix rows reproduce their printed averages exactly; tiers match."""
    started = time.perf_counter()
    rows = [
        ((4, 4, 4, 4, 5), 4.2, suit.Tier.TIER1),
        ((3, 5, 4, 5, 5), 4.4, suit.Tier.TIER1),
        ((5, 4, 4, 5, 3), 4.2, suit.Tier.TIER1),
        ((3, 3, 3, 4, 4), 3.4, suit.Tier.TIER2),
        ((2, 2, 2, 4, 3), 2.6, suit.Tier.NOT_RECOMMENDED),
        ((4, 2, 4, 2, 4), 3.2, suit.Tier.TIER2),
        ((5, 1, 3, 1, 5), 3.0, suit.Tier.TIER2),
        ((5, 1, 5, 2, 1), 2.8, suit.Tier.NOT_RECOMMENDED),
    ]
    for scores, expected_average, expected_tier in rows:
        result = suit.aggregate(suit.CriterionScores(*scores))
        assert result.average == expected_average
        assert result.tier is expected_tier
    assert time.perf_counter() - started < 1.0


def test_transfer_arithmetic():
    """Ten-scene batch and patch-polygon downlink times at 50 Mbps."""
    started = time.perf_counter()
    assert link.transfer_time(31.46e6, 50e6) == pytest.approx(5.034, abs=0.005)
    assert link.transfer_time(0.0875e6, 50e6) == pytest.approx(0.014, abs=0.002)
    assert time.perf_counter() - started < 1.0


def test_propagation_bands():
    """Fiber RTT over 4000-6000 km in 40-60 ms; free-space 600 km = 2.00 ms."""
    for km in (4000, 5000, 6000):
        rtt = 2 * link.propagation_delay(link.PropagationParams(km, link.Medium.FIBER))
        assert 0.040 <= rtt <= 0.060 + 1e-12
    one_way_ms = 1000 * link.propagation_delay(
        link.PropagationParams(600, link.Medium.FREE_SPACE)
    )
    assert one_way_ms == pytest.approx(2.00, abs=0.01)


def _elliptical_scene(rng: np.random.Generator, side: int, fraction: float, blobs: int) -> np.ndarray:
    """Class raster with ~fraction cloud cover split across ~blobs ellipses."""
    classes = np.full((side, side), 4, np.uint8)
    if fraction <= 0:
        return classes
    area_each = fraction * side * side / blobs
    for _ in range(blobs):
        aspect = rng.uniform(0.5, 2.0)
        a = np.sqrt(area_each / np.pi * aspect)
        b = area_each / np.pi / a
        cx = rng.uniform(0, side)
        cy = rng.uniform(0, side)
        x0, x1 = int(max(0, cx - a - 1)), int(min(side, cx + a + 2))
        y0, y1 = int(max(0, cy - b - 1)), int(min(side, cy + b + 2))
        if x0 >= x1 or y0 >= y1:
            continue
        yy, xx = np.mgrid[y0:y1, x0:x1]
        inside = ((xx - cx) / a) ** 2 + ((yy - cy) / b) ** 2 <= 1.0
        classes[y0:y1, x0:x1][inside] = 9
    return classes


def test_eo_reduction_property():
    """100 synthetic 1830x1830 scenes: patch >= 99% and vector >= 95% reduction,
    size scaling monotone in blob count, low-fragmentation patch reductions in
    the 99.69-99.996% band."""
    started = time.perf_counter()
    rng = np.random.default_rng(20250)
    side = 1830
    blob_levels = [1, 4, 12, 30, 48]
    vector_bytes_by_level: dict[int, list[int]] = {k: [] for k in blob_levels}
    low_fragmentation_reductions = []
    for i in range(100):
        fraction = 0.95 * i / 99
        blobs = blob_levels[i % len(blob_levels)]
        classes = _elliptical_scene(rng, side, fraction, blobs)
        raster = SceneRaster(pixel_classes=classes, raw_byte_size=side * side)
        mask = eo.derive_cloud_mask(raster)
        _, sizes = eo.connected_components(mask)
        component_count = len(sizes)
        assert component_count <= 50

        grid = eo.patch_polygons(mask)  # defaults: 64 px cells, 0.5 threshold
        patch_bytes = len(eo.serialize_artifact(grid, eo.ArtifactFormat.COMPACT_BINARY))
        patch_report = eo.reduction_report(raster, patch_bytes, mask, patch_count=grid.patch_count)
        assert patch_report.reduction_percent >= 99.0

        polys = eo.extract_contours(mask)
        vector_bytes = len(eo.serialize_artifact(polys, eo.ArtifactFormat.COMPACT_BINARY))
        vector_report = eo.reduction_report(raster, vector_bytes, mask)
        assert vector_report.reduction_percent >= 95.0
        if fraction > 0:
            vector_bytes_by_level[blobs].append(vector_bytes)
        if component_count <= 12:
            low_fragmentation_reductions.append(patch_report.reduction_percent)

    # mask simplicity scaling: fewer blobs -> smaller vector artifact
    means = [np.mean(vector_bytes_by_level[k]) for k in blob_levels]
    assert means == sorted(means)

    assert low_fragmentation_reductions
    for reduction in low_fragmentation_reductions:
        assert 99.69 <= reduction <= 99.996
    assert time.perf_counter() - started < 120.0


def _bfs_components(flags: np.ndarray, connectivity: int = 8):
    h, w = flags.shape
    labels = np.zeros((h, w), np.int32)
    offsets = (
        [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]
        if connectivity == 8
        else [(-1, 0), (0, -1), (0, 1), (1, 0)]
    )
    sizes = []
    label = 0
    for y in range(h):
        row = flags[y]
        for x in range(w):
            if not row[x] or labels[y, x]:
                continue
            label += 1
            queue = deque([(y, x)])
            labels[y, x] = label
            count = 0
            while queue:
                cy, cx = queue.popleft()
                count += 1
                for dy, dx in offsets:
                    ny, nx = cy + dy, cx + dx
                    if 0 <= ny < h and 0 <= nx < w and flags[ny, nx] and not labels[ny, nx]:
                        labels[ny, nx] = label
                        queue.append((ny, nx))
            sizes.append(count)
    return labels, sizes


def test_largest_deck_statistic_oracle():
    """Component labeling matches a brute-force flood fill exactly, 1000 trials."""
    started = time.perf_counter()
    rng = np.random.default_rng(4242)
    for trial in range(1000):
        cap = 64 if trial % 5 else 128  # occasional full-size masks
        h = int(rng.integers(1, cap + 1))
        w = int(rng.integers(1, cap + 1))
        density = float(rng.uniform(0.05, 0.95))
        flags = rng.random((h, w)) < density
        mask = eo.CloudMask(flags=flags)
        labels, sizes = eo.connected_components(mask)
        oracle_labels, oracle_sizes = _bfs_components(flags)
        assert np.array_equal(labels, oracle_labels)
        assert list(sizes) == oracle_sizes
        expected_fraction = max(oracle_sizes) / sum(oracle_sizes) if oracle_sizes else 0.0
        assert eo.largest_deck_fraction(sizes) == expected_fraction
    assert time.perf_counter() - started < 60.0


def test_contour_round_trip():
    """Rasterized contours reproduce 500 random hole-free masks exactly."""
    started = time.perf_counter()
    rng = np.random.default_rng(515)
    for _ in range(500):
        h = int(rng.integers(1, 65))
        w = int(rng.integers(1, 65))
        raw = rng.random((h, w)) < rng.uniform(0.1, 0.9)
        flags = ndimage.binary_fill_holes(raw)
        mask = eo.CloudMask(flags=flags)
        polys = eo.extract_contours(mask)
        assert np.array_equal(eo.rasterize_polygons(polys, w, h), flags)
    assert time.perf_counter() - started < 60.0


def test_stereo_pipeline_property():
    """Known translations: RANSAC within 0.25 px at >= 0.95 inliers, median
    disparity error <= 0.5 px, and end-to-end products <= 2% of the raw pair."""
    started = time.perf_counter()
    for seed, shift in [(1, 1), (2, 5), (3, 12), (4, 20)]:
        rng = np.random.default_rng(seed)
        reference, target = textured_pair(rng, 512, shift, noise_sigma=2.0)
        raw_bytes = reference.intensities.nbytes + target.intensities.nbytes

        ref_n = depth.normalize_radiometric(reference)
        tgt_n = depth.normalize_radiometric(target)
        feats_ref = depth.detect_features(ref_n, 3000)
        feats_tgt = depth.detect_features(tgt_n, 3000)
        matches = depth.match_features(feats_ref, feats_tgt, 0.75)
        assert len(matches) >= 100
        src = np.array([[feats_ref[m.index_a].keypoint.x, feats_ref[m.index_a].keypoint.y] for m in matches])
        dst = np.array([[feats_tgt[m.index_b].keypoint.x, feats_tgt[m.index_b].keypoint.y] for m in matches])
        model = depth.estimate_geometry(src, dst, threshold_px=3.0, seed=0)

        # (a) recovered translation and inlier support
        h = model.homography
        assert abs(h[0, 2] - shift) <= 0.25
        assert abs(h[1, 2]) <= 0.25
        assert np.allclose(h[:2, :2], np.eye(2), atol=0.01)
        assert model.inlier_ratio >= 0.95

        # (b) disparity against the known shift, measured pre-alignment
        dmap = depth.compute_disparity(ref_n, tgt_n, window_px=9, max_disparity=24)
        assert dmap.coverage > 0.3
        errors = np.abs(dmap.disparity_px[dmap.valid] - shift)
        assert np.median(errors) <= 0.5

        # (c) end-to-end: align, residual disparity, filter, package
        aligned = depth.warp_align(tgt_n, model)
        residual = depth.compute_disparity(ref_n, aligned, window_px=9, max_disparity=24)
        filtered, _ = depth.filter_disparity(residual, 1.0)
        products = depth.package_products(filtered, model)  # defaults: 16 bit, stride 8
        assert products.total_bytes <= 0.02 * raw_bytes
    assert time.perf_counter() - started < 180.0


def _millisecond_oracle(job: link.TransferJob, plan, step=0.001):
    """Brute-force per-millisecond accumulation; slot k covers [k, k+1) ms."""
    horizon_ms = int(round(max(w.end_s for w in plan) / step)) + 1
    rate = np.zeros(horizon_ms)
    for w in plan:
        rate[int(round(w.start_s / step)):int(round(w.end_s / step))] = w.rate_bps
    rate[: int(round(job.ready_time_s / step))] = 0.0
    sent = np.cumsum(rate * step)
    idx = int(np.searchsorted(sent, job.payload_bytes * 8.0))
    if idx >= len(sent):
        return None
    return (idx + 1) * step


def test_scheduler_oracle():
    """Greedy scheduler matches a 1 ms simulation within one step, 500 trials."""
    started = time.perf_counter()
    rng = np.random.default_rng(909)
    compared = 0
    for _ in range(500):
        windows = []
        t = round(float(rng.uniform(0, 3)), 3)
        for _ in range(int(rng.integers(1, 6))):
            start = round(t + float(rng.uniform(0, 8)), 3)
            length = round(float(rng.uniform(0.3, 6)), 3)
            windows.append(link.ContactWindow(start, start + length, float(rng.choice([8, 64, 512, 4096]))))
            t = start + length
        capacity = sum((w.end_s - w.start_s) * w.rate_bps for w in windows)
        payload = int(rng.integers(1, max(2, int(capacity / 8 * 1.1))))
        job = link.TransferJob(payload, round(float(rng.uniform(0, 8)), 3))
        expected = _millisecond_oracle(job, windows)
        try:
            result = link.schedule_transfer(job, windows)
        except CapacityError:
            assert expected is None
            continue
        assert expected is not None
        assert abs(result.completion_time_s - expected) <= 0.001 + 1e-9
        sent = sum(bits for _, bits in result.windows_used)
        assert sent == pytest.approx(job.payload_bytes * 8.0, abs=1e-6)
        compared += 1
    assert compared >= 300
    assert time.perf_counter() - started < 60.0


def _tree_digest(root: Path) -> dict[str, str]:
    return {
        str(p.relative_to(root)): sha256(p.read_bytes()).hexdigest()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


def test_full_run_determinism(tmp_path):
    """Two invocations of the fixture script produce byte-identical trees."""
    trees = []
    for name in ("first", "second"):
        out = tmp_path / name
        proc = subprocess.run(
            [sys.executable, str(REPO_ROOT / "demos" / "run_all.py"), str(out)],
            capture_output=True,
            text=True,
            cwd=REPO_ROOT,
            timeout=600,
        )
        assert proc.returncode == 0, proc.stderr[-2000:]
        trees.append(_tree_digest(out))
    assert trees[0] == trees[1]
    assert len(trees[0]) > 10
