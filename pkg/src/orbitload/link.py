"""Propagation delay, bandwidth asymmetry, and store-and-forward transfers.

Units are decimal throughout: MB = 10^6 bytes, Mbps = 10^6 bits/second.
Contact plans are ordered, non-overlapping windows; a transfer fills them
greedily from its ready time, so waiting for the next window (not the
per-hop propagation delay) usually dominates user-perceived latency.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

from ._fileio import atomic_write_json
from .errors import CapacityError

SPEED_OF_LIGHT_M_S = 299_792_458.0
FIBER_SECONDS_PER_KM = 5e-6


class Medium(Enum):
    FIBER = "fiber"
    FREE_SPACE = "free_space"


@dataclass(frozen=True)
class PropagationParams:
    distance_km: float
    medium: Medium = Medium.FIBER

    def __post_init__(self):
        if self.distance_km < 0:
            raise ValueError("distance_km must be >= 0")


@dataclass(frozen=True)
class LinkSpec:
    """Downlink/uplink rates in bits per second."""

    downlink_bps: float
    uplink_bps: float

    def __post_init__(self):
        if self.downlink_bps <= 0 or self.uplink_bps <= 0:
            raise ValueError("link rates must be > 0")

    @property
    def asymmetry_ratio(self) -> float:
        return self.downlink_bps / self.uplink_bps


@dataclass(frozen=True)
class ContactWindow:
    start_s: float
    end_s: float
    rate_bps: float

    def __post_init__(self):
        if self.end_s <= self.start_s:
            raise ValueError(f"window end {self.end_s} must be after start {self.start_s}")
        if self.rate_bps <= 0:
            raise ValueError("rate_bps must be > 0")


@dataclass(frozen=True)
class TransferJob:
    payload_bytes: int
    ready_time_s: float = 0.0
    priority: int = 0  # lower value = more urgent

    def __post_init__(self):
        if self.payload_bytes <= 0:
            raise ValueError("payload_bytes must be > 0")
        if self.ready_time_s < 0:
            raise ValueError("ready_time_s must be >= 0")


@dataclass(frozen=True)
class TransferResult:
    completion_time_s: float
    latency_s: float
    windows_used: tuple[tuple[int, float], ...]  # (window index, bits sent)

    def to_json_dict(self) -> dict:
        return {
            "completion_time_s": self.completion_time_s,
            "latency_s": self.latency_s,
            "windows_used": [
                {"window": i, "bits": bits} for i, bits in self.windows_used
            ],
        }


def propagation_delay(params: PropagationParams) -> float:
    """One-way propagation delay in seconds."""
    if params.medium is Medium.FIBER:
        return params.distance_km * FIBER_SECONDS_PER_KM
    return params.distance_km * 1000.0 / SPEED_OF_LIGHT_M_S


def transfer_time(payload_bytes: float, rate_bps: float) -> float:
    """Serialization time for a payload at a fixed rate."""
    if payload_bytes <= 0:
        raise ValueError("payload_bytes must be > 0")
    if rate_bps <= 0:
        raise ValueError("rate_bps must be > 0")
    return payload_bytes * 8.0 / rate_bps


def validate_plan(plan: Sequence[ContactWindow]) -> None:
    for prev, cur in zip(plan, plan[1:]):
        if cur.start_s < prev.end_s:
            raise ValueError(
                f"contact windows must be time-ordered and non-overlapping: "
                f"[{prev.start_s}, {prev.end_s}) then [{cur.start_s}, {cur.end_s})"
            )


def schedule_transfer(
    job: TransferJob, plan: Sequence[ContactWindow], *, not_before_s: float = 0.0
) -> TransferResult:
    """Greedy store-and-forward transfer over an ordered contact plan.

    Bits flow only inside windows at the window rate, starting no earlier
    than the job's ready time; completion is the instant the last bit
    leaves.  Raises :class:`CapacityError` when the plan cannot carry the
    payload, naming the shortfall in bits.
    """
    validate_plan(plan)
    start_floor = max(job.ready_time_s, not_before_s)
    remaining = job.payload_bytes * 8.0
    used: list[tuple[int, float]] = []
    completion = None
    for index, window in enumerate(plan):
        begin = max(start_floor, window.start_s)
        if begin >= window.end_s:
            continue
        capacity = (window.end_s - begin) * window.rate_bps
        if capacity >= remaining:
            used.append((index, remaining))
            completion = begin + remaining / window.rate_bps
            remaining = 0.0
            break
        used.append((index, capacity))
        remaining -= capacity
    if completion is None:
        raise CapacityError(remaining)
    return TransferResult(
        completion_time_s=completion,
        latency_s=completion - job.ready_time_s,
        windows_used=tuple(used),
    )


def schedule_batch(
    jobs: Sequence[TransferJob], plan: Sequence[ContactWindow]
) -> list[TransferResult]:
    """Serve jobs over one shared link, non-preemptively.

    Service order is priority ascending, then ready time, then submission
    index.  Results are returned in submission order.
    """
    validate_plan(plan)
    order = sorted(range(len(jobs)), key=lambda i: (jobs[i].priority, jobs[i].ready_time_s, i))
    results: list[TransferResult | None] = [None] * len(jobs)
    link_free = 0.0
    for i in order:
        result = schedule_transfer(jobs[i], plan, not_before_s=link_free)
        link_free = result.completion_time_s
        results[i] = result
    return results  # type: ignore[return-value]


@dataclass(frozen=True)
class ComparisonReport:
    raw_bytes: int
    artifact_bytes: int
    raw_result: TransferResult
    artifact_result: TransferResult
    latency_ratio: float
    throughput_multiplier: float
    propagation_delay_s: float | None = None

    def to_json_dict(self) -> dict:
        doc = {
            "raw_bytes": self.raw_bytes,
            "artifact_bytes": self.artifact_bytes,
            "raw": self.raw_result.to_json_dict(),
            "artifact": self.artifact_result.to_json_dict(),
            "latency_ratio": self.latency_ratio,
            "throughput_multiplier": self.throughput_multiplier,
        }
        if self.propagation_delay_s is not None:
            doc["propagation_delay_s"] = self.propagation_delay_s
            doc["raw"]["total_latency_s"] = self.raw_result.latency_s + self.propagation_delay_s
            doc["artifact"]["total_latency_s"] = (
                self.artifact_result.latency_s + self.propagation_delay_s
            )
        return doc


def compare_raw_vs_semantic(
    raw_bytes: int,
    artifact_bytes: int,
    plan: Sequence[ContactWindow],
    *,
    ready_time_s: float = 0.0,
    propagation: PropagationParams | None = None,
) -> ComparisonReport:
    """Schedule the raw payload and its semantic artifact independently.

    The throughput multiplier is the raw/artifact byte ratio; propagation
    delay, when given, is reported separately and only added in the
    combined totals.
    """
    if raw_bytes <= 0 or artifact_bytes <= 0:
        raise ValueError("byte counts must be > 0")
    raw_result = schedule_transfer(TransferJob(raw_bytes, ready_time_s), plan)
    artifact_result = schedule_transfer(TransferJob(artifact_bytes, ready_time_s), plan)
    return ComparisonReport(
        raw_bytes=raw_bytes,
        artifact_bytes=artifact_bytes,
        raw_result=raw_result,
        artifact_result=artifact_result,
        latency_ratio=raw_result.latency_s / artifact_result.latency_s,
        throughput_multiplier=raw_bytes / artifact_bytes,
        propagation_delay_s=propagation_delay(propagation) if propagation else None,
    )


# --- contact plan files and helpers ------------------------------------------

def periodic_plan(
    count: int,
    period_s: float,
    window_s: float,
    rate_bps: float,
    first_start_s: float = 0.0,
) -> list[ContactWindow]:
    """Synthetic plan: ``count`` windows of ``window_s`` every ``period_s``."""
    if window_s > period_s:
        raise ValueError("window_s must not exceed period_s")
    return [
        ContactWindow(
            start_s=first_start_s + i * period_s,
            end_s=first_start_s + i * period_s + window_s,
            rate_bps=rate_bps,
        )
        for i in range(count)
    ]


def load_plan(path: str | Path) -> list[ContactWindow]:
    """Load a contact plan file: {"version": 1, "windows": [...]}."""
    with open(path, "rb") as fh:
        doc = json.load(fh)
    if doc.get("version") != 1:
        raise ValueError(f"{path}: unsupported plan version {doc.get('version')!r}")
    plan = [
        ContactWindow(
            start_s=float(w["start_s"]), end_s=float(w["end_s"]), rate_bps=float(w["rate_bps"])
        )
        for w in doc["windows"]
    ]
    validate_plan(plan)
    return plan


def save_plan(path: str | Path, plan: Sequence[ContactWindow]) -> None:
    validate_plan(plan)
    atomic_write_json(
        path,
        {
            "version": 1,
            "windows": [
                {"start_s": w.start_s, "end_s": w.end_s, "rate_bps": w.rate_bps} for w in plan
            ],
        },
    )
