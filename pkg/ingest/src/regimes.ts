/** Cloud-regime classification, bit-matching the primary toolkit. */

import { RegimeName, SharedConfig } from "./types.js";

/**
 * Bucket an AOI-local cloud fraction.
 *
 * Buckets are closed intervals and intentionally non-exhaustive;
 * fractions in the gaps are "unbucketed".
 */
export function classifyRegime(fraction: number, config: SharedConfig): RegimeName {
  if (!(fraction >= 0 && fraction <= 1)) {
    throw new RangeError(`cloud fraction must be in [0, 1], got ${fraction}`);
  }
  for (const name of ["clear", "mixed", "cloudy"] as const) {
    const [lo, hi] = config.regimes[name];
    if (fraction >= lo && fraction <= hi) return name;
  }
  return "unbucketed";
}

/** Cloudy-pixel fraction of an SCL crop under the shared cloud classes. */
export function cloudFraction(classCodes: Uint8Array, config: SharedConfig): number {
  const cloudy = new Set(config.cloudClasses);
  let count = 0;
  for (const code of classCodes) {
    if (cloudy.has(code)) count += 1;
  }
  return count / classCodes.length;
}
