/**
 * Windowed SCL reads: locate the AOI inside a (cloud-optimized) GeoTIFF,
 * read just that window, resample nearest-neighbor (class codes must not
 * be interpolated), and emit a raster container.
 */

import type { GeoTIFF, GeoTIFFImage } from "geotiff";
import { fromArrayBuffer, fromUrl } from "geotiff";
import proj4 from "proj4";
import { writeContainer, SCL_CLASS_SEMANTICS } from "./container.js";
import { cloudFraction } from "./regimes.js";
import { BBox, CatalogItem, SharedConfig } from "./types.js";

export interface CropOptions {
  /** Longest side of the resampled crop, in pixels. */
  outSize?: number;
  /** raw_byte_size = crop pixels x this; 12 approximates a full band stack. */
  bandMultiplier?: number;
}

export interface SclCrop {
  data: Uint8Array;
  width: number;
  height: number;
  pixelSizeM: number;
  geoTransform: [number, number, number, number, number, number];
}

const PC_HOST = "planetarycomputer.microsoft.com";
const PC_SIGN_URL = "https://planetarycomputer.microsoft.com/api/sas/v1/sign";

/** Planetary Computer assets need a short-lived SAS token appended. */
export async function maybeSignHref(href: string, fetchFn: typeof fetch = fetch): Promise<string> {
  if (!href.includes("blob.core.windows.net") && !href.includes(PC_HOST)) {
    return href;
  }
  const response = await fetchFn(`${PC_SIGN_URL}?href=${encodeURIComponent(href)}`);
  if (!response.ok) {
    throw new Error(`asset signing failed: HTTP ${response.status}`);
  }
  const doc = (await response.json()) as { href?: string };
  if (!doc.href) throw new Error("asset signing returned no href");
  return doc.href;
}

function utmDefinition(epsg: number): string {
  if (epsg >= 32601 && epsg <= 32660) {
    return `+proj=utm +zone=${epsg - 32600} +datum=WGS84 +units=m +no_defs`;
  }
  if (epsg >= 32701 && epsg <= 32760) {
    return `+proj=utm +zone=${epsg - 32700} +south +datum=WGS84 +units=m +no_defs`;
  }
  throw new Error(`unsupported projected CRS EPSG:${epsg} (UTM/WGS84 expected)`);
}

/** Project a lon/lat bbox into the image CRS via its four corners. */
function projectBBox(bbox: BBox, epsg: number): { minX: number; minY: number; maxX: number; maxY: number } {
  if (epsg === 4326) {
    return { minX: bbox.west, minY: bbox.south, maxX: bbox.east, maxY: bbox.north };
  }
  const forward = proj4("EPSG:4326", utmDefinition(epsg));
  const corners: [number, number][] = [
    [bbox.west, bbox.south],
    [bbox.west, bbox.north],
    [bbox.east, bbox.south],
    [bbox.east, bbox.north],
  ];
  const projected = corners.map((c) => forward.forward(c));
  const xs = projected.map((p) => p[0]);
  const ys = projected.map((p) => p[1]);
  return {
    minX: Math.min(...xs),
    minY: Math.min(...ys),
    maxX: Math.max(...xs),
    maxY: Math.max(...ys),
  };
}

/** Read the AOI window out of an opened SCL GeoTIFF. */
export async function cropFromTiff(
  tiff: GeoTIFF,
  bbox: BBox,
  options: CropOptions = {},
): Promise<SclCrop> {
  const image: GeoTIFFImage = await tiff.getImage(0);
  const geoKeys = image.getGeoKeys() ?? {};
  const epsg = geoKeys.ProjectedCSTypeGeoKey ?? geoKeys.GeographicTypeGeoKey ?? 4326;
  const aoi = projectBBox(bbox, epsg);
  const [originX, originY] = image.getOrigin();
  const [resX, resYSigned] = image.getResolution();
  const resY = Math.abs(resYSigned);
  const width = image.getWidth();
  const height = image.getHeight();

  // image rows run north->south: y pixel = (originY - Y) / resY
  const px0 = Math.max(0, Math.floor((aoi.minX - originX) / resX));
  const px1 = Math.min(width, Math.ceil((aoi.maxX - originX) / resX));
  const py0 = Math.max(0, Math.floor((originY - aoi.maxY) / resY));
  const py1 = Math.min(height, Math.ceil((originY - aoi.minY) / resY));
  if (px0 >= px1 || py0 >= py1) {
    throw new Error("AOI does not intersect the scene footprint");
  }

  const cropW = px1 - px0;
  const cropH = py1 - py0;
  const outSize = options.outSize ?? 512;
  const scale = Math.max(1, Math.max(cropW, cropH) / outSize);
  const outW = Math.max(1, Math.round(cropW / scale));
  const outH = Math.max(1, Math.round(cropH / scale));

  const rasters = await image.readRasters({
    window: [px0, py0, px1, py1],
    width: outW,
    height: outH,
    resampleMethod: "nearest",
    samples: [0],
  });
  const band = rasters[0] as ArrayLike<number>;
  const data = Uint8Array.from(band as Uint8Array);
  const pixelSize = resX * scale;
  const geoTransform: SclCrop["geoTransform"] = [
    originX + px0 * resX,
    pixelSize,
    0,
    originY - py0 * resY,
    0,
    -(resY * (cropH / outH)),
  ];
  return { data, width: outW, height: outH, pixelSizeM: pixelSize, geoTransform };
}

export interface FetchResult {
  containerPath: string;
  cloudFraction: number;
  width: number;
  height: number;
}

/**
 * Download an item's SCL asset, crop it to the AOI, and write the
 * container.  Retries the whole read; the final write is atomic, so a
 * failed attempt leaves nothing behind.
 */
export async function fetchSclCrop(
  item: CatalogItem,
  bbox: BBox,
  outPath: string,
  config: SharedConfig,
  options: CropOptions & { retries?: number; fetchFn?: typeof fetch; tiffBuffer?: ArrayBuffer } = {},
): Promise<FetchResult> {
  if (!item.sclHref && !options.tiffBuffer) {
    throw new Error(`item ${item.id} has no scene-classification asset`);
  }
  const retries = options.retries ?? 2;
  let lastError: unknown;
  for (let attempt = 0; attempt <= retries; attempt += 1) {
    try {
      const tiff = options.tiffBuffer
        ? await fromArrayBuffer(options.tiffBuffer)
        : await fromUrl(await maybeSignHref(item.sclHref!, options.fetchFn ?? fetch));
      const crop = await cropFromTiff(tiff, bbox, options);
      const multiplier = options.bandMultiplier ?? 12;
      writeContainer(outPath, crop.data, {
        width: crop.width,
        height: crop.height,
        classSemantics: SCL_CLASS_SEMANTICS,
        pixelSizeM: crop.pixelSizeM,
        geoTransform: crop.geoTransform,
        rawByteSize: crop.width * crop.height * multiplier,
      });
      return {
        containerPath: outPath,
        cloudFraction: cloudFraction(crop.data, config),
        width: crop.width,
        height: crop.height,
      };
    } catch (error) {
      lastError = error;
      if (String(error).includes("does not intersect")) break;
    }
  }
  throw new Error(`SCL crop failed for ${item.id}: ${lastError}`);
}
