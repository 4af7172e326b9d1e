"""Score a portfolio of candidate workloads and map them onto the roadmap.

Walks the five-criterion rubric over eight representative workload
categories, prints the weighted averages and tiers, and looks up how the
strongest candidates fit each capability phase.
"""

from __future__ import annotations

import json
from pathlib import Path

from orbitload import suitability as suit
from orbitload.cli import run as cli_run

WORKLOADS = {
    "3D reconstruction from satellite imagery": (4, 4, 4, 4, 5),
    "Space RF signal processing & classification": (3, 5, 4, 5, 5),
    "EO preprocessing (radiometric, geometric)": (5, 4, 4, 5, 3),
    "Orbital navigation & timing services": (3, 3, 3, 4, 4),
    "Satellite health monitoring / telemetry analytics": (2, 2, 2, 4, 3),
    "Batch LLM inference": (4, 2, 4, 2, 4),
    "LLM training": (5, 1, 3, 1, 5),
    "Space communications infrastructure": (5, 1, 5, 2, 1),
}


def main(out_dir: str | Path = "demo_output/scoring") -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    print("=== workload suitability matrix (equal weights) ===")
    print(f"{'workload':<52} {'lat':>3} {'bw':>3} {'flt':>3} {'loc':>3} {'cmp':>3} {'avg':>5}  tier")
    results = {}
    for name, scores in WORKLOADS.items():
        result = suit.aggregate(suit.CriterionScores(*scores))
        results[name] = result
        print(
            f"{name:<52} {scores[0]:>3} {scores[1]:>3} {scores[2]:>3} {scores[3]:>3} "
            f"{scores[4]:>3} {result.average:>5.1f}  {result.tier.value}"
        )

    print("\n=== compute x reduction / latency-sensitivity ratio ===")
    for name, result in sorted(results.items(), key=lambda kv: -kv[1].trade_ratio):
        print(f"{name:<52} {result.trade_ratio:>6.2f}")

    print("\n=== phase roadmap for the tier-1 workloads ===")
    tier1 = [n for n, r in results.items() if r.tier is suit.Tier.TIER1]
    for name in tier1:
        fits = [suit.phase_fit(name, phase).value for phase in suit.Phase]
        print(f"{name:<52} P1={fits[0]:<14} P2={fits[1]:<14} P3={fits[2]}")

    # Same scoring through the CLI surface, via a profile file.
    profile = {
        "name": "EO preprocessing",
        "scores": dict(zip(
            ("latency_tolerance", "bandwidth_intensity", "fault_tolerance",
             "data_locality", "compute_intensity"),
            WORKLOADS["EO preprocessing (radiometric, geometric)"],
        )),
    }
    profile_path = out_dir / "eo_profile.json"
    profile_path.write_text(json.dumps(profile, indent=2, sort_keys=True) + "\n")
    code = cli_run(["score", "--profile", str(profile_path), "--out", str(out_dir / "eo_score.json")])
    print(f"\ncli score exit code: {code}; result in {out_dir / 'eo_score.json'}")


if __name__ == "__main__":
    main()
