/** Scene manifest consumed by the primary toolkit's batch reducer. */

import { mkdirSync, renameSync, writeFileSync } from "fs";
import { basename, dirname, join } from "path";
import { SceneRecord } from "./types.js";

export function manifestDocument(records: SceneRecord[]): object {
  return {
    version: 1,
    scenes: records.map((r) => ({
      id: r.id,
      acquired: r.acquired,
      cloud_fraction: r.cloudFraction,
      regime: r.regime,
      container: r.container,
    })),
  };
}

export function writeManifest(path: string, records: SceneRecord[]): string {
  mkdirSync(dirname(path), { recursive: true });
  const tmp = join(dirname(path), `.${basename(path)}.${process.pid}.tmp`);
  writeFileSync(tmp, JSON.stringify(manifestDocument(records), null, 2) + "\n");
  renameSync(tmp, path);
  return path;
}
