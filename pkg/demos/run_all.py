"""Run every demo into one output tree.

The tree is a deterministic function of the code: repeated runs produce
byte-identical files, which the acceptance suite checks.

Usage: python demos/run_all.py [OUT_DIR]
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import depth_pipeline
import downlink_simulation
import eo_reduction
import workload_scoring
from orbitload.cli import run as cli_run


def main(out_dir: str | Path = "demo_output") -> Path:
    out_dir = Path(out_dir)
    workload_scoring.main(out_dir / "scoring")
    print()
    eo_reduction.main(out_dir / "eo")
    print()
    depth_pipeline.main(out_dir / "depth")
    print()
    downlink_simulation.main(out_dir / "link")
    print()
    code = cli_run(["report", "--dir", str(out_dir), "--out", str(out_dir / "consolidated.json")])
    print(f"consolidated report exit code: {code} -> {out_dir / 'consolidated.json'}")
    return out_dir


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
