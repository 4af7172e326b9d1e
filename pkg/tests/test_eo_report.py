import numpy as np
import pytest

from orbitload.eo import (
    Regime,
    batch_summary,
    derive_cloud_mask,
    reduction_report,
)
from orbitload.eo.report import ReductionReport
from orbitload.raster import SceneRaster


def _report(raw_bytes, artifact_bytes, fraction=0.8, patch_count=None):
    side = 100
    classes = np.full((side, side), 4, np.uint8)
    cloudy = int(round(fraction * side * side))
    classes.ravel()[:cloudy] = 9
    raster = SceneRaster(pixel_classes=classes, raw_byte_size=raw_bytes)
    mask = derive_cloud_mask(raster)
    return reduction_report(raster, artifact_bytes, mask, patch_count=patch_count)


class TestReductionReport:
    def test_batch_figures(self):
        report = _report(31_460_000, 98_000)
        assert report.reduction_percent == pytest.approx(99.69, abs=0.005)
        report = _report(31_460_000, 1_000)
        assert report.reduction_percent == pytest.approx(99.997, abs=0.01)

    def test_artifact_equals_raw(self):
        report = _report(31_460_000, 31_460_000)
        assert report.reduction_percent == 0.0
        assert not report.oversized_artifact

    def test_oversized_artifact_flagged_not_rejected(self):
        report = _report(20_000, 30_000)
        assert report.oversized_artifact
        assert report.reduction_percent < 0

    def test_reduction_strictly_decreasing_in_artifact_bytes(self):
        values = [_report(10**6, b).reduction_percent for b in (10, 100, 1000, 10**4)]
        assert values == sorted(values, reverse=True)

    def test_carries_mask_statistics(self):
        classes = np.full((100, 100), 4, np.uint8)
        classes[:40, :50] = 9  # one 2000-px deck
        classes[60:70, 60:70] = 8  # one 100-px deck
        raster = SceneRaster(pixel_classes=classes)
        mask = derive_cloud_mask(raster)
        report = reduction_report(raster, 500, mask, patch_count=7)
        assert report.cloud_fraction == 0.21
        assert report.largest_deck_fraction == pytest.approx(2000 / 2100)
        assert report.patch_count == 7
        assert report.regime is Regime.UNBUCKETED

    def test_negative_artifact_rejected(self):
        with pytest.raises(ValueError):
            _report(1000, -1)

    def test_json_round_trip(self):
        report = _report(31_460_000, 98_000, patch_count=12)
        doc = report.to_json_dict()
        assert ReductionReport.from_json_dict(doc) == report


class TestBatchSummary:
    def test_ten_cloudy_scenes(self):
        reports = [_report(3_146_000, 9_800, fraction=0.8) for _ in range(10)]
        summary = batch_summary(reports)
        assert set(summary) == {Regime.CLOUDY}
        cloudy = summary[Regime.CLOUDY]
        assert cloudy.scene_count == 10
        assert cloudy.mean_cloud_fraction == pytest.approx(0.8)
        assert cloudy.total_raw_bytes == 31_460_000
        assert cloudy.total_artifact_bytes == 98_000

    def test_empty_list(self):
        assert batch_summary([]) == {}

    def test_mixed_regimes_recounted(self):
        fractions = [0.05, 0.05, 0.4, 0.8, 0.8, 0.8, 0.2]
        reports = [_report(10**6, 100, fraction=f) for f in fractions]
        summary = batch_summary(reports)
        assert summary[Regime.CLEAR].scene_count == 2
        assert summary[Regime.MIXED].scene_count == 1
        assert summary[Regime.CLOUDY].scene_count == 3
        assert summary[Regime.UNBUCKETED].scene_count == 1
