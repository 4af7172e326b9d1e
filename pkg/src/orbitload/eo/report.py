"""Byte-exact reduction accounting and per-regime batch summaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..raster import SceneRaster
from .mask import (
    CloudMask,
    Regime,
    classify_regime,
    cloud_fraction,
    connected_components,
    largest_deck_fraction,
)


@dataclass
class ReductionReport:
    raw_bytes: int
    artifact_bytes: int
    reduction_percent: float
    cloud_fraction: float
    largest_deck_fraction: float
    patch_count: int | None
    regime: Regime
    oversized_artifact: bool = False

    def to_json_dict(self) -> dict:
        return {
            "raw_bytes": self.raw_bytes,
            "artifact_bytes": self.artifact_bytes,
            "reduction_percent": self.reduction_percent,
            "cloud_fraction": self.cloud_fraction,
            "largest_deck_fraction": self.largest_deck_fraction,
            "patch_count": self.patch_count,
            "regime": self.regime.value,
            "oversized_artifact": self.oversized_artifact,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ReductionReport":
        return cls(
            raw_bytes=int(doc["raw_bytes"]),
            artifact_bytes=int(doc["artifact_bytes"]),
            reduction_percent=float(doc["reduction_percent"]),
            cloud_fraction=float(doc["cloud_fraction"]),
            largest_deck_fraction=float(doc["largest_deck_fraction"]),
            patch_count=None if doc.get("patch_count") is None else int(doc["patch_count"]),
            regime=Regime(doc["regime"]),
            oversized_artifact=bool(doc.get("oversized_artifact", False)),
        )


def reduction_report(
    raster: SceneRaster,
    artifact_bytes: int,
    mask: CloudMask,
    *,
    patch_count: int | None = None,
    connectivity: int = 8,
    regime_bounds: dict | None = None,
) -> ReductionReport:
    """Reduction percentage plus the mask statistics that explain it.

    An artifact larger than the raw payload is flagged, not rejected; the
    reduction percentage goes negative in that case.
    """
    raw = raster.raw_byte_size
    if raw is None or raw <= 0:
        raise ValueError("raster raw_byte_size must be positive")
    if artifact_bytes < 0:
        raise ValueError("artifact_bytes must be >= 0")
    fraction = cloud_fraction(mask)
    _, sizes = connected_components(mask, connectivity)
    return ReductionReport(
        raw_bytes=int(raw),
        artifact_bytes=int(artifact_bytes),
        reduction_percent=(1.0 - artifact_bytes / raw) * 100.0,
        cloud_fraction=fraction,
        largest_deck_fraction=largest_deck_fraction(sizes),
        patch_count=patch_count,
        regime=classify_regime(fraction, regime_bounds),
        oversized_artifact=artifact_bytes > raw,
    )


@dataclass
class RegimeSummary:
    scene_count: int
    mean_cloud_fraction: float
    mean_reduction_percent: float
    total_raw_bytes: int
    total_artifact_bytes: int

    def to_json_dict(self) -> dict:
        return {
            "scene_count": self.scene_count,
            "mean_cloud_fraction": self.mean_cloud_fraction,
            "mean_reduction_percent": self.mean_reduction_percent,
            "total_raw_bytes": self.total_raw_bytes,
            "total_artifact_bytes": self.total_artifact_bytes,
        }


def batch_summary(reports: list[ReductionReport]) -> dict[Regime, RegimeSummary]:
    """Group reports by regime; regimes with no scenes are omitted."""
    summaries: dict[Regime, RegimeSummary] = {}
    for regime in Regime:
        group = [r for r in reports if r.regime is regime]
        if not group:
            continue
        summaries[regime] = RegimeSummary(
            scene_count=len(group),
            mean_cloud_fraction=float(np.mean([r.cloud_fraction for r in group])),
            mean_reduction_percent=float(np.mean([r.reduction_percent for r in group])),
            total_raw_bytes=sum(r.raw_bytes for r in group),
            total_artifact_bytes=sum(r.artifact_bytes for r in group),
        )
    return summaries
