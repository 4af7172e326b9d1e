import pytest

from orbitload import suitability as suit
from orbitload.suitability import (
    ComputeClass,
    CriterionScores,
    FaultClass,
    FitLevel,
    LocalityClass,
    Phase,
    PhaseFitRegistry,
    Tier,
    WorkloadProfile,
    aggregate,
    trade_ratio,
    phase_fit,
    score_bandwidth,
    score_categorical,
    score_latency,
    score_profile,
    tier,
)

# Eight representative workload rows and the exact averages they aggregate to.
MATRIX_ROWS = {
    "3D reconstruction from satellite imagery": ((4, 4, 4, 4, 5), 4.2, Tier.TIER1),
    "Space RF signal processing & classification": ((3, 5, 4, 5, 5), 4.4, Tier.TIER1),
    "EO preprocessing (radiometric, geometric)": ((5, 4, 4, 5, 3), 4.2, Tier.TIER1),
    "Orbital navigation & timing services": ((3, 3, 3, 4, 4), 3.4, Tier.TIER2),
    "Satellite health monitoring / telemetry analytics": ((2, 2, 2, 4, 3), 2.6, Tier.NOT_RECOMMENDED),
    "Batch LLM inference": ((4, 2, 4, 2, 4), 3.2, Tier.TIER2),
    "LLM training": ((5, 1, 3, 1, 5), 3.0, Tier.TIER2),
    "Space communications infrastructure": ((5, 1, 5, 2, 1), 2.8, Tier.NOT_RECOMMENDED),
}


class TestScoreLatency:
    def test_bands(self):
        assert score_latency(0.5) == 1
        assert score_latency(7200) == 5
        assert score_latency(0) == 1
        assert score_latency(5) == 2
        assert score_latency(30) == 3
        assert score_latency(600) == 4

    def test_boundaries_adjacent(self):
        # half-open bands: each threshold starts the next score
        for budget, expected in [(1, 2), (10, 3), (60, 4), (3600, 5)]:
            assert score_latency(budget) == expected
            assert score_latency(budget - 1e-9) == expected - 1

    def test_monotone(self):
        budgets = [0, 0.5, 1, 5, 10, 59, 60, 3599, 3600, 1e6]
        scores = [score_latency(b) for b in budgets]
        assert scores == sorted(scores)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            score_latency(-0.1)


class TestScoreBandwidth:
    def test_bands(self):
        assert score_bandwidth(150) == 5
        assert score_bandwidth(1.0) == 1
        assert score_bandwidth(20) == 4  # half-open boundary
        assert score_bandwidth(2) == 2
        assert score_bandwidth(5) == 3
        assert score_bandwidth(100) == 5

    def test_monotone(self):
        factors = [1, 1.9, 2, 4.9, 5, 19.9, 20, 99.9, 100, 1e5]
        scores = [score_bandwidth(f) for f in factors]
        assert scores == sorted(scores)

    def test_below_one_rejected(self):
        with pytest.raises(ValueError):
            score_bandwidth(0.5)


def test_score_categorical():
    assert score_categorical(FaultClass.MISSION_CRITICAL) == 1
    assert score_categorical(LocalityClass.EXCLUSIVELY_SPACE_NATIVE) == 5
    assert score_categorical(ComputeClass.MODERATE) == 3
    for enum_cls in (FaultClass, LocalityClass, ComputeClass):
        assert [score_categorical(m) for m in enum_cls] == [1, 2, 3, 4, 5]


class TestAggregate:
    def test_matrix_rows_exact(self):
        for name, (scores, expected_avg, expected_tier) in MATRIX_ROWS.items():
            result = aggregate(CriterionScores(*scores))
            assert result.average == expected_avg, name
            assert result.tier is expected_tier, name

    def test_all_minimum(self):
        assert aggregate(CriterionScores(1, 1, 1, 1, 1)).average == 1.0

    def test_equal_weight_average_is_multiple_of_point_two(self):
        import itertools

        for scores in itertools.islice(itertools.product(range(1, 6), repeat=5), 0, None, 97):
            avg = aggregate(CriterionScores(*scores)).average
            assert abs(avg * 5 - round(avg * 5)) < 1e-12

    def test_explicit_weights(self):
        scores = CriterionScores(5, 4, 4, 5, 3)
        res = aggregate(scores, [0.5, 0.125, 0.125, 0.125, 0.125])
        assert res.average == pytest.approx(0.5 * 5 + 0.125 * (4 + 4 + 5 + 3))

    def test_weight_validation(self):
        scores = CriterionScores(3, 3, 3, 3, 3)
        with pytest.raises(ValueError):
            aggregate(scores, [0.5, 0.5, 0.5, 0.5, 0.5])
        with pytest.raises(ValueError):
            aggregate(scores, [0.4, 0.4, 0.4, -0.2, 0.0])
        with pytest.raises(ValueError):
            aggregate(scores, [1.0])

    def test_renormalized_weights_leave_average_unchanged(self):
        import numpy as np

        rng = np.random.default_rng(7)
        for _ in range(50):
            raw = rng.uniform(0.1, 3.0, 5)
            weights = raw / raw.sum()
            scaled = (raw * 17.3) / (raw * 17.3).sum()
            scores = CriterionScores(*(int(v) for v in rng.integers(1, 6, 5)))
            a1 = aggregate(scores, weights).average
            a2 = aggregate(scores, scaled).average
            assert a1 == pytest.approx(a2, abs=1e-12)

    def test_invalid_scores_rejected(self):
        with pytest.raises(ValueError):
            CriterionScores(0, 3, 3, 3, 3)
        with pytest.raises(ValueError):
            CriterionScores(3, 3, 3, 3, 6)


class TestTier:
    def test_examples(self):
        assert tier(4.2) is Tier.TIER1
        assert tier(3.0) is Tier.TIER2
        assert tier(2.6) is Tier.NOT_RECOMMENDED

    def test_boundary_four_is_tier1(self):
        assert tier(4.0) is Tier.TIER1

    def test_monotone(self):
        order = [Tier.NOT_RECOMMENDED, Tier.TIER2, Tier.TIER1]
        averages = [1.0, 2.0, 2.9, 3.0, 3.9, 4.0, 4.1, 5.0]
        ranks = [order.index(tier(a)) for a in averages]
        assert ranks == sorted(ranks)

    def test_domain(self):
        with pytest.raises(ValueError):
            tier(0.9)
        with pytest.raises(ValueError):
            tier(5.1)


class TestEq1:
    def test_formula(self):
        scores = CriterionScores(4, 4, 4, 4, 5)
        assert trade_ratio(scores) == pytest.approx(5 * 4 / (6 - 4))

    def test_strictly_monotone(self):
        base = dict(latency_tolerance=3, bandwidth_intensity=3, fault_tolerance=3,
                    data_locality=3, compute_intensity=3)
        ref = trade_ratio(CriterionScores(**base))
        for field, direction in [("compute_intensity", 1), ("bandwidth_intensity", 1),
                                 ("latency_tolerance", 1)]:
            up = trade_ratio(CriterionScores(**{**base, field: 4}))
            assert (up - ref) * direction > 0


class TestPhaseFit:
    def test_examples(self):
        assert phase_fit("EO preprocessing", Phase.P1_GPU_ONLY) is FitLevel.STRONG
        assert phase_fit("LLM training", Phase.P2_GPU_CHEAP_POWER) is FitLevel.UNSUITABLE
        assert phase_fit("Space RF", Phase.P3_GPU_CHEAP_POWER_LISL) is FitLevel.ANCHOR

    def test_legend_is_one_to_one(self):
        assert len({f.value for f in FitLevel}) == 4

    def test_unknown_workload(self):
        with pytest.raises(KeyError):
            phase_fit("quantum mining", Phase.P1_GPU_ONLY)

    def test_registry_from_file(self, tmp_path):
        doc = {
            "version": 1,
            "workloads": [
                {"name": "Custom thing", "aliases": ["ct"],
                 "fits": {"P1": "strong", "P2": "anchor", "P3": "anchor"}},
            ],
        }
        path = tmp_path / "registry.json"
        import json

        path.write_text(json.dumps(doc))
        registry = PhaseFitRegistry.from_file(path)
        assert registry.lookup("CT", Phase.P1_GPU_ONLY) is FitLevel.STRONG


class TestProfiles:
    def test_profile_derived_scores(self):
        profile = WorkloadProfile(
            name="batch image reduction",
            latency_budget_s=7200,
            reduction_factor=50,
            fault_class=FaultClass.HIGH,
            locality_class=LocalityClass.EXCLUSIVELY_SPACE_NATIVE,
            compute_class=ComputeClass.MODERATE,
        )
        scores = score_profile(profile)
        assert scores == CriterionScores(5, 4, 4, 5, 3)
        assert aggregate(scores).average == 4.2

    def test_profile_validation(self):
        with pytest.raises(ValueError):
            WorkloadProfile("x", -1, 2, FaultClass.LOW, LocalityClass.MIXED, ComputeClass.LOW)
        with pytest.raises(ValueError):
            WorkloadProfile("x", 1, 0.5, FaultClass.LOW, LocalityClass.MIXED, ComputeClass.LOW)

    def test_profile_from_json(self):
        doc = {
            "name": "rf survey",
            "latency_budget_s": 30,
            "reduction_factor": 150,
            "fault_class": "High",
            "locality_class": "ExclusivelySpaceNative",
            "compute_class": "VeryHigh",
        }
        profile = suit.profile_from_json_dict(doc)
        assert score_profile(profile) == CriterionScores(3, 5, 4, 5, 5)
        with pytest.raises(ValueError):
            suit.profile_from_json_dict({"name": "incomplete"})
