/**
 * Raster-container writer matching the primary toolkit's documented format:
 * a JSON sidecar plus a row-major raw binary file (uint8, one byte per
 * sample).  Writes are atomic (temp + rename) and deterministic, so
 * re-fetching a scene reproduces identical bytes.
 */

import { mkdirSync, renameSync, writeFileSync } from "fs";
import { dirname, basename, join } from "path";

export interface ContainerMeta {
  width: number;
  height: number;
  classSemantics?: Record<string, string>;
  pixelSizeM?: number;
  geoTransform?: [number, number, number, number, number, number];
  rawByteSize: number;
}

/** Stable stringify: sorted keys, two-space indent, trailing newline. */
function stableJson(value: unknown): string {
  const sorted = (input: unknown): unknown => {
    if (Array.isArray(input)) return input.map(sorted);
    if (input !== null && typeof input === "object") {
      return Object.fromEntries(
        Object.keys(input as Record<string, unknown>)
          .sort()
          .map((k) => [k, sorted((input as Record<string, unknown>)[k])]),
      );
    }
    return input;
  };
  return JSON.stringify(sorted(value), null, 2) + "\n";
}

function atomicWrite(path: string, data: Buffer | string): void {
  mkdirSync(dirname(path), { recursive: true });
  const tmp = join(dirname(path), `.${basename(path)}.${process.pid}.tmp`);
  writeFileSync(tmp, data);
  renameSync(tmp, path);
}

/**
 * Write `<sidecarPath>` and its `.bin` data file; returns the sidecar path.
 * `classCodes` is row-major uint8, length width*height.
 */
export function writeContainer(
  sidecarPath: string,
  classCodes: Uint8Array,
  meta: ContainerMeta,
): string {
  if (classCodes.length !== meta.width * meta.height) {
    throw new Error(
      `class data has ${classCodes.length} samples, expected ${meta.width * meta.height}`,
    );
  }
  if (meta.rawByteSize < classCodes.length) {
    throw new Error("raw_byte_size must be at least one byte per pixel");
  }
  const dataFile = basename(sidecarPath).replace(/\.json$/, "") + ".bin";
  const sidecar = {
    container_version: 1,
    width: meta.width,
    height: meta.height,
    dtype: "uint8",
    kind: "class_codes",
    class_semantics: meta.classSemantics ?? null,
    pixel_size_m: meta.pixelSizeM ?? null,
    geo_transform: meta.geoTransform ?? null,
    raw_byte_size: meta.rawByteSize,
    data_file: dataFile,
  };
  atomicWrite(join(dirname(sidecarPath), dataFile), Buffer.from(classCodes));
  atomicWrite(sidecarPath, stableJson(sidecar));
  return sidecarPath;
}

export const SCL_CLASS_SEMANTICS: Record<string, string> = {
  "0": "no_data",
  "1": "saturated_defective",
  "2": "dark_area",
  "3": "cloud_shadow",
  "4": "vegetation",
  "5": "not_vegetated",
  "6": "water",
  "7": "unclassified",
  "8": "cloud_medium_probability",
  "9": "cloud_high_probability",
  "10": "thin_cirrus",
  "11": "snow_ice",
};
