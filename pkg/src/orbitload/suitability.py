"""Workload suitability rubric, aggregation, tiers, and phase-fit lookup.

Five criteria are scored 1-5 (higher = better fit for orbital compute):
latency tolerance, bandwidth intensity (achievable raw-to-artifact
reduction), fault tolerance, data locality, and compute intensity.  A
weighted average places a workload in a tier, and a separate ratio
summarizes the dominant trade: compute intensity times bandwidth reduction
over latency sensitivity.

Scores can be supplied directly or derived from a :class:`WorkloadProfile`
through the band thresholds in the toolkit config.  The phase-fit registry
maps named workload categories onto the three capability phases of an
orbital deployment roadmap.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Sequence

from .config import default_config

EQUAL_WEIGHTS: tuple[float, ...] = (0.2, 0.2, 0.2, 0.2, 0.2)


class FaultClass(Enum):
    MISSION_CRITICAL = 1
    LOW = 2
    MODERATE = 3
    HIGH = 4
    VERY_HIGH = 5


class LocalityClass(Enum):
    EARTH_ORIGINATED = 1
    MOSTLY_TERRESTRIAL = 2
    MIXED = 3
    PRIMARILY_SPACE = 4
    EXCLUSIVELY_SPACE_NATIVE = 5


class ComputeClass(Enum):
    VERY_LOW = 1
    LOW = 2
    MODERATE = 3
    HIGH = 4
    VERY_HIGH = 5


class Tier(Enum):
    TIER1 = "Tier1"
    TIER2 = "Tier2"
    NOT_RECOMMENDED = "NotRecommended"


class Phase(Enum):
    P1_GPU_ONLY = "P1"
    P2_GPU_CHEAP_POWER = "P2"
    P3_GPU_CHEAP_POWER_LISL = "P3"


class FitLevel(Enum):
    ANCHOR = "anchor"
    STRONG = "strong"
    OPPORTUNISTIC = "opportunistic"
    UNSUITABLE = "unsuitable"


@dataclass(frozen=True)
class CriterionScores:
    """The five rubric scores, each an integer in 1..5."""

    latency_tolerance: int
    bandwidth_intensity: int
    fault_tolerance: int
    data_locality: int
    compute_intensity: int

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 5:
                raise ValueError(f"{name} must be an integer in 1..5, got {value!r}")

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (
            self.latency_tolerance,
            self.bandwidth_intensity,
            self.fault_tolerance,
            self.data_locality,
            self.compute_intensity,
        )

    def as_dict(self) -> dict[str, int]:
        return {
            "latency_tolerance": self.latency_tolerance,
            "bandwidth_intensity": self.bandwidth_intensity,
            "fault_tolerance": self.fault_tolerance,
            "data_locality": self.data_locality,
            "compute_intensity": self.compute_intensity,
        }


@dataclass(frozen=True)
class WorkloadProfile:
    """Measurable workload characteristics from which scores are derived."""

    name: str
    latency_budget_s: float
    reduction_factor: float
    fault_class: FaultClass
    locality_class: LocalityClass
    compute_class: ComputeClass

    def __post_init__(self):
        if self.latency_budget_s < 0:
            raise ValueError("latency_budget_s must be >= 0")
        if self.reduction_factor < 1:
            raise ValueError("reduction_factor must be >= 1")


@dataclass(frozen=True)
class SuitabilityResult:
    scores: CriterionScores
    weights: tuple[float, float, float, float, float]
    average: float
    tier: Tier
    trade_ratio: float

    def to_json_dict(self) -> dict:
        return {
            "scores": self.scores.as_dict(),
            "weights": list(self.weights),
            "average": self.average,
            "tier": self.tier.value,
            "trade_ratio": self.trade_ratio,
        }


@dataclass(frozen=True)
class PhaseFit:
    phase: Phase
    fit: FitLevel


def score_latency(latency_budget_s: float, thresholds: Sequence[float] | None = None) -> int:
    """Latency-tolerance score from an acceptable response delay in seconds.

    The four ascending thresholds split the axis into five bands; the
    defaults read the verbal bands sub-second / seconds / tens of seconds /
    minutes / hours-plus as [0,1), [1,10), [10,60), [60,3600), [3600,inf).
    """
    if latency_budget_s < 0:
        raise ValueError("latency_budget_s must be >= 0")
    if thresholds is None:
        thresholds = default_config()["suitability"]["latency_thresholds_s"]
    return _band_score(latency_budget_s, thresholds)


def score_bandwidth(reduction_factor: float, thresholds: Sequence[float] | None = None) -> int:
    """Bandwidth-intensity score from the raw/artifact reduction factor."""
    if reduction_factor < 1:
        raise ValueError("reduction_factor must be >= 1")
    if thresholds is None:
        thresholds = default_config()["suitability"]["bandwidth_thresholds"]
    return _band_score(reduction_factor, thresholds)


def _band_score(value: float, thresholds: Sequence[float]) -> int:
    score = 1
    for t in thresholds:
        if value >= t:
            score += 1
    return score


def score_categorical(cls: FaultClass | LocalityClass | ComputeClass) -> int:
    """Rubric score of a fault / locality / compute class (its table position)."""
    return cls.value


def score_profile(profile: WorkloadProfile, config: dict | None = None) -> CriterionScores:
    """Derive the five scores from a workload profile via the config bands."""
    suit = (config or default_config())["suitability"]
    return CriterionScores(
        latency_tolerance=score_latency(profile.latency_budget_s, suit["latency_thresholds_s"]),
        bandwidth_intensity=score_bandwidth(profile.reduction_factor, suit["bandwidth_thresholds"]),
        fault_tolerance=score_categorical(profile.fault_class),
        data_locality=score_categorical(profile.locality_class),
        compute_intensity=score_categorical(profile.compute_class),
    )


def tier(average: float, tier1_min: float = 4.0, tier2_min: float = 3.0) -> Tier:
    """Tier for an average score; Tier1 >= 4.0, Tier2 in [3.0, 4.0)."""
    if not 1.0 <= average <= 5.0:
        raise ValueError(f"average must be in [1, 5], got {average}")
    if average >= tier1_min:
        return Tier.TIER1
    if average >= tier2_min:
        return Tier.TIER2
    return Tier.NOT_RECOMMENDED


def trade_ratio(scores: CriterionScores) -> float:
    """Compute intensity x bandwidth reduction over latency sensitivity.

    Latency sensitivity is taken as (6 - latency tolerance score) so a
    tolerance of 5 maps to the lowest sensitivity of 1.
    """
    return scores.compute_intensity * scores.bandwidth_intensity / (6 - scores.latency_tolerance)


def aggregate(
    scores: CriterionScores,
    weights: Sequence[float] | None = None,
    *,
    tier1_min: float = 4.0,
    tier2_min: float = 3.0,
) -> SuitabilityResult:
    """Weighted average of the five scores plus tier and trade ratio.

    ``weights=None`` means equal weighting, computed as sum/5 so the
    averages come out as exact decimals (multiples of 0.2).
    """
    values = scores.as_tuple()
    if weights is None:
        average = sum(values) / 5
        weights = EQUAL_WEIGHTS
    else:
        weights = tuple(float(w) for w in weights)
        if len(weights) != 5:
            raise ValueError("weights must have exactly five entries")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative")
        if abs(math.fsum(weights) - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {math.fsum(weights)}")
        average = math.fsum(w * s for w, s in zip(weights, values))
    return SuitabilityResult(
        scores=scores,
        weights=weights,  # type: ignore[arg-type]
        average=average,
        tier=tier(average, tier1_min, tier2_min),
        trade_ratio=trade_ratio(scores),
    )


# --- phase-fit registry ----------------------------------------------------

def _normalize(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", " ", name.lower()).strip()


class PhaseFitRegistry:
    """Named workload categories mapped to a fit level per phase.

    Loaded from a JSON file so operators can extend or replace the shipped
    six-category roadmap; see ``data/phase_fits.json`` for the schema.
    """

    def __init__(self, entries: dict[str, dict[Phase, FitLevel]]):
        self._entries = entries
        self._index: dict[str, str] = {}
        for name in entries:
            self._index[_normalize(name)] = name

    def add_alias(self, alias: str, name: str) -> None:
        self._index[_normalize(alias)] = name

    @property
    def workloads(self) -> list[str]:
        return list(self._entries)

    def lookup(self, workload_name: str, phase: Phase) -> FitLevel:
        key = _normalize(workload_name)
        name = self._index.get(key)
        if name is None:
            known = ", ".join(sorted(self._entries))
            raise KeyError(f"unknown workload {workload_name!r}; known: {known}")
        return self._entries[name][phase]

    @classmethod
    def from_json_dict(cls, doc: dict) -> "PhaseFitRegistry":
        if doc.get("version") != 1:
            raise ValueError(f"phase-fit registry: unsupported version {doc.get('version')!r}")
        entries: dict[str, dict[Phase, FitLevel]] = {}
        aliases: list[tuple[str, str]] = []
        for row in doc["workloads"]:
            fits = {
                phase: FitLevel(row["fits"][phase.value]) for phase in Phase
            }
            entries[row["name"]] = fits
            for alias in row.get("aliases", []):
                aliases.append((alias, row["name"]))
        registry = cls(entries)
        for alias, name in aliases:
            registry.add_alias(alias, name)
        return registry

    @classmethod
    def from_file(cls, path: str | Path) -> "PhaseFitRegistry":
        with open(path, "rb") as fh:
            return cls.from_json_dict(json.load(fh))


def default_registry() -> PhaseFitRegistry:
    with resources.files("orbitload.data").joinpath("phase_fits.json").open("rb") as fh:
        return PhaseFitRegistry.from_json_dict(json.load(fh))


def phase_fit(
    workload_name: str, phase: Phase, registry: PhaseFitRegistry | None = None
) -> FitLevel:
    """Fit level of a named workload category at a roadmap phase."""
    if registry is None:
        registry = default_registry()
    return registry.lookup(workload_name, phase)


def parse_class(enum_cls, text: str):
    """Parse a categorical class from a config/profile string, any casing."""
    key = re.sub(r"[^a-z0-9]+", "", text.lower())
    for member in enum_cls:
        if re.sub(r"[^a-z0-9]+", "", member.name.lower()) == key:
            return member
    names = ", ".join(m.name for m in enum_cls)
    raise ValueError(f"unknown {enum_cls.__name__} value {text!r}; expected one of {names}")


def profile_from_json_dict(doc: dict) -> WorkloadProfile:
    """Build a profile from the documented JSON shape (see README)."""
    try:
        return WorkloadProfile(
            name=doc["name"],
            latency_budget_s=float(doc["latency_budget_s"]),
            reduction_factor=float(doc["reduction_factor"]),
            fault_class=parse_class(FaultClass, doc["fault_class"]),
            locality_class=parse_class(LocalityClass, doc["locality_class"]),
            compute_class=parse_class(ComputeClass, doc["compute_class"]),
        )
    except KeyError as exc:
        raise ValueError(f"workload profile missing field {exc.args[0]!r}") from None
