"""Plane-projective geometry estimation and image alignment.

The cross-date tiles this pipeline targets are ortho-rectified, so the
inter-pass mapping is modeled as a 3x3 homography, estimated by RANSAC
over normalized-DLT hypotheses from 4-point samples and refit on the
final inlier set.  Hypothesis sampling comes from one seeded generator,
so results are reproducible for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import EstimationError
from ..raster import ImageTile

_MIN_SAMPLES = 4
_DEGENERACY_EPS = 1e-9


@dataclass
class GeometryModel:
    """Homography from source to destination coordinates plus its support."""

    homography: np.ndarray  # (3, 3), h33 normalized to 1 when nonzero
    inlier_indices: np.ndarray
    inlier_ratio: float
    threshold_px: float

    def __post_init__(self):
        h = np.asarray(self.homography, dtype=np.float64)
        if h.shape != (3, 3):
            raise ValueError("homography must be 3x3")
        if abs(np.linalg.det(h)) < 1e-12:
            raise ValueError("homography must be invertible")
        self.homography = h

    def to_json_dict(self) -> dict:
        return {
            "homography": [[float(v) for v in row] for row in self.homography],
            "inlier_count": int(len(self.inlier_indices)),
            "inlier_ratio": self.inlier_ratio,
            "threshold_px": self.threshold_px,
        }


def _project(h: np.ndarray, pts: np.ndarray) -> np.ndarray:
    ones = np.ones((pts.shape[0], 1))
    proj = np.hstack([pts, ones]) @ h.T
    w = proj[:, 2:3]
    w = np.where(np.abs(w) < 1e-12, 1e-12, w)
    return proj[:, :2] / w


def _normalize_points(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    centroid = pts.mean(axis=0)
    shifted = pts - centroid
    mean_dist = np.mean(np.hypot(shifted[:, 0], shifted[:, 1]))
    scale = math.sqrt(2.0) / mean_dist if mean_dist > 0 else 1.0
    transform = np.array(
        [[scale, 0.0, -scale * centroid[0]], [0.0, scale, -scale * centroid[1]], [0.0, 0.0, 1.0]]
    )
    return shifted * scale, transform


def estimate_homography_dlt(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Least-squares homography via the normalized direct linear transform."""
    src = np.asarray(src, dtype=np.float64)
    dst = np.asarray(dst, dtype=np.float64)
    if src.shape != dst.shape or src.ndim != 2 or src.shape[0] < 4:
        raise EstimationError("homography needs at least four point pairs")
    src_n, t_src = _normalize_points(src)
    dst_n, t_dst = _normalize_points(dst)
    n = src.shape[0]
    a = np.zeros((2 * n, 9))
    x, y = src_n[:, 0], src_n[:, 1]
    u, v = dst_n[:, 0], dst_n[:, 1]
    a[0::2, 0] = -x
    a[0::2, 1] = -y
    a[0::2, 2] = -1.0
    a[0::2, 6] = x * u
    a[0::2, 7] = y * u
    a[0::2, 8] = u
    a[1::2, 3] = -x
    a[1::2, 4] = -y
    a[1::2, 5] = -1.0
    a[1::2, 6] = x * v
    a[1::2, 7] = y * v
    a[1::2, 8] = v
    _, _, vt = np.linalg.svd(a)
    h_n = vt[-1].reshape(3, 3)
    h = np.linalg.inv(t_dst) @ h_n @ t_src
    if abs(h[2, 2]) > 1e-12:
        h = h / h[2, 2]
    return h


def symmetric_transfer_error(h: np.ndarray, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Per-pair max of forward and backward reprojection distances."""
    h_inv = np.linalg.inv(h)
    fwd = np.linalg.norm(_project(h, src) - dst, axis=1)
    bwd = np.linalg.norm(_project(h_inv, dst) - src, axis=1)
    return np.maximum(fwd, bwd)


def _sample_degenerate(pts: np.ndarray) -> bool:
    # Any three collinear points make the 4-point sample useless.
    for skip in range(4):
        tri = np.delete(pts, skip, axis=0)
        area = abs(
            (tri[1, 0] - tri[0, 0]) * (tri[2, 1] - tri[0, 1])
            - (tri[2, 0] - tri[0, 0]) * (tri[1, 1] - tri[0, 1])
        )
        if area < _DEGENERACY_EPS:
            return True
    return False


def estimate_geometry(
    src_pts: np.ndarray,
    dst_pts: np.ndarray,
    threshold_px: float = 3.0,
    max_iterations: int = 2000,
    seed: int = 0,
    confidence: float = 0.99,
) -> GeometryModel:
    """RANSAC homography from matched point coordinates.

    Inliers have symmetric transfer error <= ``threshold_px``; the model
    is refit on the best hypothesis's inliers and the reported inlier set
    is recomputed under the refit model.  The iteration count adapts to
    the observed inlier ratio up to ``max_iterations``.
    """
    src = np.asarray(src_pts, dtype=np.float64)
    dst = np.asarray(dst_pts, dtype=np.float64)
    if src.ndim != 2 or src.shape != dst.shape or src.shape[1] != 2:
        raise EstimationError("matches must be two equal (N, 2) coordinate arrays")
    n = src.shape[0]
    if n < _MIN_SAMPLES:
        raise EstimationError(f"need at least {_MIN_SAMPLES} matches, got {n}")
    if threshold_px <= 0:
        raise EstimationError("threshold_px must be > 0")
    rng = np.random.default_rng(seed)
    best_inliers: np.ndarray | None = None
    cap = max_iterations
    iteration = 0
    while iteration < cap:
        iteration += 1
        sample = rng.choice(n, size=_MIN_SAMPLES, replace=False)
        if _sample_degenerate(src[sample]) or _sample_degenerate(dst[sample]):
            continue
        try:
            h = estimate_homography_dlt(src[sample], dst[sample])
        except (EstimationError, np.linalg.LinAlgError):
            continue
        if abs(np.linalg.det(h)) < 1e-12:
            continue
        errors = symmetric_transfer_error(h, src, dst)
        inliers = np.nonzero(errors <= threshold_px)[0]
        if best_inliers is None or len(inliers) > len(best_inliers):
            best_inliers = inliers
            ratio = len(inliers) / n
            if 0.0 < ratio < 1.0:
                denom = math.log(1.0 - ratio ** _MIN_SAMPLES)
                if denom < 0:
                    needed = math.ceil(math.log(1.0 - confidence) / denom)
                    cap = min(max_iterations, max(iteration, needed))
            elif ratio >= 1.0:
                break
    if best_inliers is None or len(best_inliers) < _MIN_SAMPLES:
        raise EstimationError("no non-degenerate consensus found")
    h_final = estimate_homography_dlt(src[best_inliers], dst[best_inliers])
    errors = symmetric_transfer_error(h_final, src, dst)
    final_inliers = np.nonzero(errors <= threshold_px)[0]
    if len(final_inliers) < _MIN_SAMPLES:
        # Refit degraded the model; keep the hypothesis-stage consensus.
        h_final = estimate_homography_dlt(src[best_inliers], dst[best_inliers])
        final_inliers = best_inliers
    return GeometryModel(
        homography=h_final,
        inlier_indices=final_inliers,
        inlier_ratio=len(final_inliers) / n,
        threshold_px=float(threshold_px),
    )


def warp_align(tile: ImageTile, model: GeometryModel) -> ImageTile:
    """Resample ``tile`` into the source frame of ``model``.

    Output pixel (x, y) is sampled bilinearly from the tile at H(x, y);
    samples falling outside the tile are zero-filled and marked invalid.
    """
    h = model.homography
    if abs(np.linalg.det(h)) < 1e-12:
        raise ValueError("model must be invertible")
    src = tile.intensities.astype(np.float64)
    height, width = src.shape
    if height < 2 or width < 2:
        raise ValueError("warp requires at least a 2x2 tile")
    ys, xs = np.mgrid[0:height, 0:width]
    pts = np.column_stack([xs.ravel(), ys.ravel()]).astype(np.float64)
    mapped = _project(h, pts)
    mx = mapped[:, 0].reshape(height, width)
    my = mapped[:, 1].reshape(height, width)
    valid = (mx >= 0) & (my >= 0) & (mx <= width - 1) & (my <= height - 1)
    x0c = np.clip(np.floor(mx).astype(np.int64), 0, max(width - 2, 0))
    y0c = np.clip(np.floor(my).astype(np.int64), 0, max(height - 2, 0))
    fx = mx - x0c
    fy = my - y0c
    top = src[y0c, x0c] * (1 - fx) + src[y0c, x0c + 1] * fx
    bottom = src[y0c + 1, x0c] * (1 - fx) + src[y0c + 1, x0c + 1] * fx
    values = top * (1 - fy) + bottom * fy
    if tile.valid is not None:
        src_valid = tile.valid[y0c, x0c] & tile.valid[y0c, x0c + 1] & \
            tile.valid[y0c + 1, x0c] & tile.valid[y0c + 1, x0c + 1]
        valid &= src_valid
    out = np.where(valid, np.rint(values), 0.0)
    out = np.clip(out, 0, tile.max_value).astype(tile.intensities.dtype)
    return ImageTile(
        intensities=out,
        source_bytes=tile.source_bytes,
        valid=valid,
        meta={**tile.meta, "warped": True},
    )
