/** Shared types for the SCL ingest pipeline. */

/** Geographic bounding box in lon/lat degrees (WGS84). */
export interface BBox {
  west: number;
  south: number;
  east: number;
  north: number;
}

/** A catalog query: where, when, which collection, metadata prefilter. */
export interface AoiQuery {
  bbox: BBox;
  /** ISO dates, inclusive. */
  startDate: string;
  endDate: string;
  collection: string;
  /** Catalog-level cloud metadata ceiling (percent), applied server-side. */
  maxCloudCoverPct?: number;
}

/** The subset of a STAC item the pipeline needs. */
export interface CatalogItem {
  id: string;
  datetime: string;
  /** href of the scene-classification asset, when present. */
  sclHref?: string;
  cloudCoverPct?: number;
}

export type RegimeName = "clear" | "mixed" | "cloudy" | "unbucketed";

/** One downloaded scene, bucketed by its AOI-local cloud fraction. */
export interface SceneRecord {
  id: string;
  acquired: string;
  /** Computed from the downloaded SCL crop, not catalog metadata. */
  cloudFraction: number;
  regime: RegimeName;
  /** Container sidecar path, relative to the manifest. */
  container: string;
}

/** Regime bounds shared with the primary toolkit's config format. */
export interface SharedConfig {
  regimes: Record<"clear" | "mixed" | "cloudy", [number, number]>;
  cloudClasses: number[];
}
