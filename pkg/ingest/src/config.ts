/**
 * Shared-constant loading.
 *
 * Regime bounds and cloud classes must bit-match the primary toolkit, so
 * they are read from the primary's versioned config file format
 * (defaults.json).  Resolution order: explicit path argument, the
 * ORBITLOAD_CONFIG environment variable, then the vendored copy shipped
 * with this package (kept in sync by a contract test).
 */

import { readFileSync } from "fs";
import { dirname, join } from "path";
import { fileURLToPath } from "url";
import { SharedConfig } from "./types.js";

const HERE = dirname(fileURLToPath(import.meta.url));
export const VENDORED_CONFIG_PATH = join(HERE, "..", "vendor", "defaults.json");

export function resolveConfigPath(explicit?: string): string {
  if (explicit) return explicit;
  if (process.env.ORBITLOAD_CONFIG) return process.env.ORBITLOAD_CONFIG;
  return VENDORED_CONFIG_PATH;
}

export function loadSharedConfig(path?: string): SharedConfig {
  const resolved = resolveConfigPath(path);
  const doc = JSON.parse(readFileSync(resolved, "utf-8"));
  if (doc.config_version !== 1) {
    throw new Error(`${resolved}: unsupported config_version ${doc.config_version}`);
  }
  const eo = doc.eo;
  if (!eo?.regimes || !eo?.cloud_classes) {
    throw new Error(`${resolved}: missing eo.regimes or eo.cloud_classes`);
  }
  return {
    regimes: {
      clear: eo.regimes.clear,
      mixed: eo.regimes.mixed,
      cloudy: eo.regimes.cloudy,
    },
    cloudClasses: eo.cloud_classes,
  };
}
