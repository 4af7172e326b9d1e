"""Corner detection and oriented 256-bit binary descriptors.

Corners come from a 16-pixel segment test (circle radius 3, contiguous arc
of 9) with non-maximum suppression; orientation from the intensity
centroid of a radius-15 disk; descriptors from 256 point-pair intensity
comparisons on a 5x5-smoothed patch.  The point-pair pattern is generated
once from a fixed, documented seed (``depth.descriptor_seed`` in the
config, default 7) and steered by orientation quantized to 32 bins, so
the whole stage is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from ..config import default_config
from ..raster import ImageTile

CIRCLE16 = np.array(
    [
        (0, -3), (1, -3), (2, -2), (3, -1),
        (3, 0), (3, 1), (2, 2), (1, 3),
        (0, 3), (-1, 3), (-2, 2), (-3, 1),
        (-3, 0), (-3, -1), (-2, -2), (-1, -3),
    ],
    dtype=np.int64,
)
ARC_LENGTH = 9
PATCH_RADIUS = 15
PATTERN_RADIUS = 13  # keeps rotated pairs inside the patch
ORIENTATION_BINS = 32
DESCRIPTOR_BITS = 256
_BAND_ROWS = 1024


@dataclass(frozen=True)
class Keypoint:
    x: float
    y: float
    response: float
    orientation: float


class Feature(NamedTuple):
    keypoint: Keypoint
    descriptor: np.ndarray  # (32,) uint8 = 256 bits


def descriptor_array(features: list[Feature]) -> np.ndarray:
    """Stack feature descriptors into an (N, 32) uint8 array."""
    if not features:
        return np.zeros((0, DESCRIPTOR_BITS // 8), dtype=np.uint8)
    return np.stack([f.descriptor for f in features])


def _pattern(seed: int) -> np.ndarray:
    """256 point pairs (x1, y1, x2, y2), clipped to the pattern disk."""
    rng = np.random.default_rng(seed)
    pts = rng.normal(0.0, PATCH_RADIUS / 2.5, size=(DESCRIPTOR_BITS, 4))
    for cols in ((0, 1), (2, 3)):
        xy = pts[:, cols]
        r = np.hypot(xy[:, 0], xy[:, 1])
        scale = np.where(r > PATTERN_RADIUS, PATTERN_RADIUS / np.maximum(r, 1e-9), 1.0)
        pts[:, cols] = xy * scale[:, None]
    return pts


def _steered_patterns(seed: int) -> np.ndarray:
    """Integer pattern per orientation bin: (bins, 256, 4)."""
    base = _pattern(seed)
    out = np.empty((ORIENTATION_BINS, DESCRIPTOR_BITS, 4), dtype=np.int64)
    for k in range(ORIENTATION_BINS):
        theta = 2.0 * np.pi * k / ORIENTATION_BINS
        c, s = np.cos(theta), np.sin(theta)
        for off, cols in ((0, (0, 1)), (2, (2, 3))):
            x = base[:, cols[0]]
            y = base[:, cols[1]]
            out[k, :, off] = np.rint(c * x - s * y)
            out[k, :, off + 1] = np.rint(s * x + c * y)
    return out


_PATTERN_CACHE: dict[int, np.ndarray] = {}


def _disk_offsets(radius: int) -> tuple[np.ndarray, np.ndarray]:
    span = np.arange(-radius, radius + 1)
    dy, dx = np.meshgrid(span, span, indexing="ij")
    keep = dx * dx + dy * dy <= radius * radius
    return dy[keep].ravel(), dx[keep].ravel()


_DISK_DY, _DISK_DX = _disk_offsets(PATCH_RADIUS)


def _segment_response(img: np.ndarray, threshold: int) -> np.ndarray:
    """Per-pixel corner response; zero where the segment test fails."""
    h, w = img.shape
    response = np.zeros((h, w), dtype=np.float32)
    if h < 7 or w < 7:
        return response
    data = img.astype(np.int32)
    for band_start in range(3, h - 3, _BAND_ROWS):
        band_end = min(band_start + _BAND_ROWS, h - 3)
        rows = np.arange(band_start, band_end)
        center = data[band_start:band_end, 3:w - 3]
        circle = np.empty(center.shape + (16,), dtype=np.int32)
        for k, (ox, oy) in enumerate(CIRCLE16):
            circle[:, :, k] = data[band_start + oy:band_end + oy, 3 + ox:w - 3 + ox]
        diff = circle - center[:, :, None]
        bright = diff > threshold
        dark = diff < -threshold
        is_corner = _has_arc(bright) | _has_arc(dark)
        if not is_corner.any():
            continue
        bright_sum = np.where(diff > threshold, diff - threshold, 0).sum(axis=2)
        dark_sum = np.where(diff < -threshold, -diff - threshold, 0).sum(axis=2)
        score = np.maximum(bright_sum, dark_sum).astype(np.float32)
        response[band_start:band_end, 3:w - 3] = np.where(is_corner, score, 0.0)
    return response


def _has_arc(flags: np.ndarray) -> np.ndarray:
    run = flags.copy()
    for k in range(1, ARC_LENGTH):
        run &= np.roll(flags, -k, axis=2)
    return run.any(axis=2)


def detect_features(
    tile: ImageTile,
    max_keypoints: int,
    *,
    threshold: int | None = None,
    seed: int | None = None,
) -> list[Feature]:
    """Detect up to ``max_keypoints`` corners with descriptors.

    Returns features sorted by nonincreasing response (ties broken by
    row-major position).  Images too small for the descriptor patch yield
    an empty list.
    """
    if max_keypoints < 1:
        raise ValueError("max_keypoints must be >= 1")
    cfg = default_config()["depth"]
    if threshold is None:
        threshold = cfg["fast_threshold"]
    if seed is None:
        seed = cfg["descriptor_seed"]
    img = tile.intensities
    h, w = img.shape
    margin = PATCH_RADIUS
    if h <= 2 * margin or w <= 2 * margin:
        return []

    response = _segment_response(img, int(threshold))
    local_max = ndimage.maximum_filter(response, size=3, mode="constant")
    peaks = (response > 0) & (response >= local_max)
    peaks[:margin, :] = False
    peaks[h - margin:, :] = False
    peaks[:, :margin] = False
    peaks[:, w - margin:] = False
    ys, xs = np.nonzero(peaks)
    if ys.size == 0:
        return []
    resp = response[ys, xs]
    order = np.lexsort((xs, ys, -resp))[:max_keypoints]
    ys, xs, resp = ys[order], xs[order], resp[order]

    data = img.astype(np.float64)
    patch = data[ys[:, None] + _DISK_DY[None, :], xs[:, None] + _DISK_DX[None, :]]
    m10 = (patch * _DISK_DX[None, :]).sum(axis=1)
    m01 = (patch * _DISK_DY[None, :]).sum(axis=1)
    theta = np.arctan2(m01, m10)

    if seed not in _PATTERN_CACHE:
        _PATTERN_CACHE[seed] = _steered_patterns(seed)
    patterns = _PATTERN_CACHE[seed]
    bins = np.floor((theta % (2.0 * np.pi)) / (2.0 * np.pi) * ORIENTATION_BINS).astype(int)
    bins %= ORIENTATION_BINS
    smoothed = ndimage.uniform_filter(img.astype(np.float32), size=5, mode="nearest")
    chosen = patterns[bins]  # (K, 256, 4)
    x1 = xs[:, None] + chosen[:, :, 0]
    y1 = ys[:, None] + chosen[:, :, 1]
    x2 = xs[:, None] + chosen[:, :, 2]
    y2 = ys[:, None] + chosen[:, :, 3]
    bits = smoothed[y1, x1] < smoothed[y2, x2]
    descriptors = np.packbits(bits, axis=1, bitorder="little")

    features = []
    for i in range(len(ys)):
        kp = Keypoint(
            x=float(xs[i]), y=float(ys[i]), response=float(resp[i]), orientation=float(theta[i])
        )
        features.append(Feature(keypoint=kp, descriptor=descriptors[i]))
    return features
