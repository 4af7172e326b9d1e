#!/usr/bin/env node
/**
 * Ingest CLI: search a STAC catalog for scene-classification rasters over
 * an AOI, download and crop them, bucket by AOI-local cloud fraction, and
 * write containers plus a manifest for the primary toolkit.
 *
 *   orbitload-ingest --bbox -122.5,47.4,-122.1,47.8 \
 *     --start 2025-01-01 --end 2025-12-31 --out-dir scenes --per-bucket 10
 */

import { join } from "path";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { bucketAndSample } from "./bucket.js";
import { loadSharedConfig } from "./config.js";
import { writeManifest } from "./manifest.js";
import { classifyRegime } from "./regimes.js";
import { fetchSclCrop } from "./scl.js";
import { DEFAULT_CATALOG, DEFAULT_COLLECTION, parseBBox, search } from "./stac.js";
import { SceneRecord } from "./types.js";

async function main(): Promise<number> {
  const argv = await yargs(hideBin(process.argv))
    .option("bbox", { type: "string", demandOption: true, describe: "west,south,east,north (degrees)" })
    .option("start", { type: "string", demandOption: true, describe: "start date (YYYY-MM-DD)" })
    .option("end", { type: "string", demandOption: true, describe: "end date (YYYY-MM-DD)" })
    .option("out-dir", { type: "string", demandOption: true })
    .option("per-bucket", { type: "number", default: 10 })
    .option("catalog", { type: "string", default: DEFAULT_CATALOG })
    .option("collection", { type: "string", default: DEFAULT_COLLECTION })
    .option("max-cloud-meta", { type: "number", describe: "catalog-side cloud cover ceiling (%)" })
    .option("out-size", { type: "number", default: 512, describe: "longest crop side (px)" })
    .option("band-multiplier", { type: "number", default: 12 })
    .option("config", { type: "string", describe: "shared defaults.json from the primary toolkit" })
    .strict()
    .parse();

  const config = loadSharedConfig(argv.config);
  const bbox = parseBBox(argv.bbox);
  const items = await search(
    {
      bbox,
      startDate: argv.start,
      endDate: argv.end,
      collection: argv.collection,
      maxCloudCoverPct: argv["max-cloud-meta"],
    },
    { catalogUrl: argv.catalog },
  );
  console.log(`catalog returned ${items.length} items`);

  const records: SceneRecord[] = [];
  for (const item of items) {
    if (!item.sclHref) {
      console.warn(`skip ${item.id}: no scene-classification asset`);
      continue;
    }
    const containerName = `${item.id}.json`;
    try {
      const result = await fetchSclCrop(item, bbox, join(argv["out-dir"], containerName), config, {
        outSize: argv["out-size"],
        bandMultiplier: argv["band-multiplier"],
      });
      records.push({
        id: item.id,
        acquired: item.datetime,
        cloudFraction: result.cloudFraction,
        regime: classifyRegime(result.cloudFraction, config),
        container: containerName,
      });
      console.log(
        `${item.id}: ${result.width}x${result.height} crop, cloud ${(100 * result.cloudFraction).toFixed(1)}%`,
      );
    } catch (error) {
      console.warn(`skip ${item.id}: ${error}`);
    }
  }

  const { sampled, warnings } = bucketAndSample(records, argv["per-bucket"]);
  for (const warning of warnings) console.warn(`bucket warning: ${warning}`);
  const manifestPath = writeManifest(join(argv["out-dir"], "manifest.json"), sampled);
  console.log(`wrote ${sampled.length} sampled scenes to ${manifestPath}`);
  console.log(`next: orbitload eo-reduce --manifest ${manifestPath} --out-dir <dir>`);
  return 0;
}

main().then(
  (code) => process.exit(code),
  (error) => {
    console.error(String(error));
    process.exit(1);
  },
);
