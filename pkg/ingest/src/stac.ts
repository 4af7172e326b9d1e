/** STAC catalog search with retry/backoff. */

import { AoiQuery, BBox, CatalogItem } from "./types.js";

export const DEFAULT_CATALOG = "https://planetarycomputer.microsoft.com/api/stac/v1";
export const DEFAULT_COLLECTION = "sentinel-2-l2a";

const SCL_ASSET_KEYS = ["SCL", "scl", "SCL_20m"];

export function validateBBox(bbox: BBox): void {
  if (!(bbox.west < bbox.east) || !(bbox.south < bbox.north)) {
    throw new RangeError(
      `invalid bbox: west<east and south<north required, got ${JSON.stringify(bbox)}`,
    );
  }
}

export function parseBBox(text: string): BBox {
  const parts = text.split(",").map(Number);
  if (parts.length !== 4 || parts.some(Number.isNaN)) {
    throw new RangeError(`bbox must be "west,south,east,north", got ${text}`);
  }
  const bbox = { west: parts[0], south: parts[1], east: parts[2], north: parts[3] };
  validateBBox(bbox);
  return bbox;
}

/** Extract the fields the pipeline needs from raw STAC items, time-sorted. */
export function parseSearchResponse(doc: any): CatalogItem[] {
  const features: any[] = doc?.features ?? [];
  const items: CatalogItem[] = features.map((f) => {
    let sclHref: string | undefined;
    for (const key of SCL_ASSET_KEYS) {
      if (f.assets?.[key]?.href) {
        sclHref = f.assets[key].href;
        break;
      }
    }
    return {
      id: f.id,
      datetime: f.properties?.datetime ?? "",
      sclHref,
      cloudCoverPct: f.properties?.["eo:cloud_cover"],
    };
  });
  items.sort((a, b) => a.datetime.localeCompare(b.datetime) || a.id.localeCompare(b.id));
  return items;
}

export interface SearchOptions {
  catalogUrl?: string;
  limit?: number;
  retries?: number;
  backoffMs?: number;
  fetchFn?: typeof fetch;
}

/**
 * POST a bbox/date search; retries transient failures with exponential
 * backoff before giving up.
 */
export async function search(query: AoiQuery, options: SearchOptions = {}): Promise<CatalogItem[]> {
  validateBBox(query.bbox);
  if (query.startDate > query.endDate) {
    return [];
  }
  const catalog = options.catalogUrl ?? DEFAULT_CATALOG;
  const fetchFn = options.fetchFn ?? fetch;
  const body: Record<string, unknown> = {
    collections: [query.collection],
    bbox: [query.bbox.west, query.bbox.south, query.bbox.east, query.bbox.north],
    datetime: `${query.startDate}T00:00:00Z/${query.endDate}T23:59:59Z`,
    limit: options.limit ?? 200,
  };
  if (query.maxCloudCoverPct !== undefined) {
    body.query = { "eo:cloud_cover": { lte: query.maxCloudCoverPct } };
  }
  const retries = options.retries ?? 3;
  const backoffMs = options.backoffMs ?? 1000;
  let lastError: unknown;
  for (let attempt = 0; attempt <= retries; attempt += 1) {
    try {
      const response = await fetchFn(`${catalog}/search`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      });
      if (!response.ok) {
        throw new Error(`catalog returned HTTP ${response.status}`);
      }
      return parseSearchResponse(await response.json());
    } catch (error) {
      lastError = error;
      if (attempt < retries) {
        await new Promise((resolve) => setTimeout(resolve, backoffMs * 2 ** attempt));
      }
    }
  }
  throw new Error(`catalog unreachable after ${retries + 1} attempts: ${lastError}`);
}
