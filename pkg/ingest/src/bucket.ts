/** Regime bucketing and deterministic per-bucket sampling. */

import { RegimeName, SceneRecord } from "./types.js";

export interface SampleResult {
  sampled: SceneRecord[];
  /** Buckets that had fewer scenes than requested. */
  warnings: string[];
}

/**
 * Take the first `perBucket` scenes of each regime, ordered by acquisition
 * time (id as tiebreak), so a fixed catalog snapshot always yields the
 * same sample.  Short buckets are returned in full with a warning;
 * unbucketed scenes are never sampled.
 */
export function bucketAndSample(records: SceneRecord[], perBucket = 10): SampleResult {
  if (perBucket < 1) {
    throw new RangeError("perBucket must be >= 1");
  }
  const sampled: SceneRecord[] = [];
  const warnings: string[] = [];
  for (const regime of ["clear", "mixed", "cloudy"] as RegimeName[]) {
    const bucket = records
      .filter((r) => r.regime === regime)
      .sort((a, b) => a.acquired.localeCompare(b.acquired) || a.id.localeCompare(b.id));
    if (bucket.length < perBucket) {
      warnings.push(`${regime}: only ${bucket.length} of ${perBucket} scenes available`);
    }
    sampled.push(...bucket.slice(0, perBucket));
  }
  return { sampled, warnings };
}
