import { readFileSync } from "fs";
import { mkdtempSync, rmSync } from "fs";
import { tmpdir } from "os";
import { join, dirname } from "path";
import { fileURLToPath } from "url";
// @ts-ignore - geotiff ships permissive types for writeArrayBuffer
import { fromArrayBuffer, writeArrayBuffer } from "geotiff";
import proj4 from "proj4";
import { afterAll, describe, expect, it } from "vitest";
import { loadSharedConfig } from "../src/config.js";
import { cropFromTiff, fetchSclCrop } from "../src/scl.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const PRIMARY_CONFIG = join(HERE, "..", "..", "src", "orbitload", "data", "defaults.json");
const config = loadSharedConfig(PRIMARY_CONFIG);

const tmp = mkdtempSync(join(tmpdir(), "ingest-scl-"));
afterAll(() => rmSync(tmp, { recursive: true, force: true }));

// Synthetic UTM-10N SCL tile: 128x128 at 20 m, cloud block in the NW quadrant.
const ORIGIN_X = 550000;
const ORIGIN_Y = 5278000;
const SIZE = 128;
const RES = 20;

function syntheticTile(): { values: Uint8Array; metadata: Record<string, unknown> } {
  const values = new Uint8Array(SIZE * SIZE).fill(4);
  for (let y = 0; y < 40; y += 1) {
    for (let x = 0; x < 40; x += 1) values[y * SIZE + x] = 9;
  }
  return {
    values,
    metadata: {
      height: SIZE,
      width: SIZE,
      ModelPixelScale: [RES, RES, 0],
      ModelTiepoint: [0, 0, 0, ORIGIN_X, ORIGIN_Y, 0],
      ProjectedCSTypeGeoKey: 32610,
      BitsPerSample: [8],
      SamplesPerPixel: 1,
      PhotometricInterpretation: 1,
    },
  };
}

function lonLatBBoxForPixels(px0: number, py0: number, px1: number, py1: number) {
  const inverse = proj4("EPSG:4326", "+proj=utm +zone=10 +datum=WGS84 +units=m +no_defs").inverse;
  const [west, north] = inverse([ORIGIN_X + px0 * RES, ORIGIN_Y - py0 * RES]);
  const [east, south] = inverse([ORIGIN_X + px1 * RES, ORIGIN_Y - py1 * RES]);
  return { west, south, east, north };
}

describe("cropFromTiff", () => {
  it("windows the AOI and preserves class codes (nearest-neighbor)", async () => {
    const { values, metadata } = syntheticTile();
    const buffer = await writeArrayBuffer(values, metadata as any);
    const tiff = await fromArrayBuffer(buffer);
    const bbox = lonLatBBoxForPixels(0, 0, 80, 80);
    const crop = await cropFromTiff(tiff, bbox, { outSize: 512 });
    // lon/lat corners bulge past the pixel rectangle, so allow +-2 px slack
    expect(Math.abs(crop.width - 80)).toBeLessThanOrEqual(2);
    expect(Math.abs(crop.height - 80)).toBeLessThanOrEqual(2);
    const codes = new Set(crop.data);
    expect([...codes].sort()).toEqual([4, 9]);
    const cloudy = crop.data.filter((v) => v === 9).length;
    const expected = (40 * 40) / (80 * 80);
    expect(cloudy / crop.data.length).toBeCloseTo(expected, 1);
  });

  it("resamples down to the requested output size", async () => {
    const { values, metadata } = syntheticTile();
    const tiff = await fromArrayBuffer(await writeArrayBuffer(values, metadata as any));
    const bbox = lonLatBBoxForPixels(0, 0, 128, 128);
    const crop = await cropFromTiff(tiff, bbox, { outSize: 32 });
    expect(Math.max(crop.width, crop.height)).toBeLessThanOrEqual(33);
    expect(crop.pixelSizeM).toBeGreaterThan(RES);
    expect([...new Set(crop.data)].sort()).toEqual([4, 9]);
  });

  it("rejects an AOI outside the footprint", async () => {
    const { values, metadata } = syntheticTile();
    const tiff = await fromArrayBuffer(await writeArrayBuffer(values, metadata as any));
    const far = { west: 10.0, south: 50.0, east: 10.1, north: 50.1 }; // wrong continent
    await expect(cropFromTiff(tiff, far)).rejects.toThrow(/intersect/);
  });
});

describe("fetchSclCrop", () => {
  it("writes a container and computes the AOI-local cloud fraction", async () => {
    const { values, metadata } = syntheticTile();
    const buffer = await writeArrayBuffer(values, metadata as any);
    const bbox = lonLatBBoxForPixels(0, 0, 80, 80);
    const out = join(tmp, "scene.json");
    const result = await fetchSclCrop(
      { id: "synthetic", datetime: "2025-06-01T00:00:00Z" },
      bbox,
      out,
      config,
      { tiffBuffer: buffer, outSize: 512, bandMultiplier: 12 },
    );
    expect(result.cloudFraction).toBeCloseTo(0.25, 1);
    const sidecar = JSON.parse(readFileSync(out, "utf-8"));
    expect(sidecar.raw_byte_size).toBe(sidecar.width * sidecar.height * 12);
    expect(sidecar.geo_transform[0]).toBeCloseTo(ORIGIN_X, -2);
    expect(sidecar.pixel_size_m).toBeGreaterThan(0);
  });

  it("repeated fetches produce identical bytes", async () => {
    const { values, metadata } = syntheticTile();
    const buffer = await writeArrayBuffer(values, metadata as any);
    const bbox = lonLatBBoxForPixels(8, 8, 72, 72);
    const p1 = join(tmp, "idem_a.json");
    const p2 = join(tmp, "idem_b.json");
    const item = { id: "synthetic", datetime: "2025-06-01T00:00:00Z" };
    await fetchSclCrop(item, bbox, p1, config, { tiffBuffer: buffer });
    await fetchSclCrop(item, bbox, p2, config, { tiffBuffer: buffer });
    const a = JSON.parse(readFileSync(p1, "utf-8"));
    const b = JSON.parse(readFileSync(p2, "utf-8"));
    expect({ ...a, data_file: null }).toEqual({ ...b, data_file: null });
    expect(
      readFileSync(join(tmp, "idem_a.bin")).equals(readFileSync(join(tmp, "idem_b.bin"))),
    ).toBe(true);
  });

  it("errors when the item lacks an SCL asset", async () => {
    await expect(
      fetchSclCrop(
        { id: "bare", datetime: "2025-01-01T00:00:00Z" },
        { west: 0, south: 0, east: 1, north: 1 },
        join(tmp, "bare.json"),
        config,
      ),
    ).rejects.toThrow(/no scene-classification asset/);
  });
});
