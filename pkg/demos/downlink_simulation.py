"""Store-and-forward latency: raw payloads versus semantic artifacts.

Builds a contact plan with realistic gaps, then shows how waiting for
windows dominates latency, how payload size interacts with window
capacity, and what the raw-vs-artifact trade buys.
"""

from __future__ import annotations

import json
from pathlib import Path

from orbitload import link
from orbitload.cli import run as cli_run


def main(out_dir: str | Path = "demo_output/link") -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    # ~95-minute orbit with an 8-minute ground contact per pass at 50 Mbps
    plan = link.periodic_plan(count=6, period_s=5700, window_s=480, rate_bps=50e6, first_start_s=900)
    link.save_plan(out_dir / "plan.json", plan)

    print("=== propagation floor ===")
    for km, medium in [(4000, link.Medium.FIBER), (600, link.Medium.FREE_SPACE)]:
        delay = link.propagation_delay(link.PropagationParams(km, medium))
        print(f"{medium.value:<11} {km:>5} km one-way: {delay * 1000:7.3f} ms")

    print("\n=== one ten-scene batch: raw vs patch polygons ===")
    raw_bytes, artifact_bytes = 31_460_000, 98_000
    for payload, label in [(raw_bytes, "raw"), (artifact_bytes, "artifact")]:
        pure = link.transfer_time(payload, 50e6)
        print(f"{label:<9} {payload / 1e6:>7.3f} MB -> {pure:8.4f} s of pure serialization at 50 Mbps")
    comparison = link.compare_raw_vs_semantic(raw_bytes, artifact_bytes, plan, ready_time_s=0.0)
    print(f"with the contact plan (first window at t=900 s):")
    print(f"  raw latency      {comparison.raw_result.latency_s:10.3f} s")
    print(f"  artifact latency {comparison.artifact_result.latency_s:10.3f} s")
    print(f"  throughput multiplier {comparison.throughput_multiplier:8.1f}x")

    print("\n=== store-and-forward dominance ===")
    for ready in (0.0, 890.0, 1379.0):
        result = link.schedule_transfer(link.TransferJob(artifact_bytes, ready), plan)
        print(f"ready at t={ready:7.1f} s -> done at t={result.completion_time_s:8.3f} s "
              f"(latency {result.latency_s:8.3f} s)")

    print("\n=== shared link, prioritized batch ===")
    jobs = [
        link.TransferJob(12_000_000, 0.0, priority=2),
        link.TransferJob(98_000, 0.0, priority=0),
        link.TransferJob(5_000_000, 0.0, priority=1),
    ]
    for job, result in zip(jobs, link.schedule_batch(jobs, plan)):
        print(f"priority {job.priority}: {job.payload_bytes / 1e6:7.3f} MB -> "
              f"completes {result.completion_time_s:9.3f} s")

    code = cli_run([
        "simulate", "--plan", str(out_dir / "plan.json"),
        "--payload-bytes", str(raw_bytes), "--artifact-bytes", str(artifact_bytes),
        "--distance-km", "600", "--medium", "free_space",
        "--report", str(out_dir / "comparison.json"),
    ])
    doc = json.loads((out_dir / "comparison.json").read_text())
    print(f"\ncli simulate exit code: {code}; latency ratio {doc['latency_ratio']:.1f}x "
          f"written to {out_dir / 'comparison.json'}")


if __name__ == "__main__":
    main()
