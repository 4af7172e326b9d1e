export { bucketAndSample } from "./bucket.js";
export { loadSharedConfig, resolveConfigPath, VENDORED_CONFIG_PATH } from "./config.js";
export { writeContainer, SCL_CLASS_SEMANTICS } from "./container.js";
export { manifestDocument, writeManifest } from "./manifest.js";
export { classifyRegime, cloudFraction } from "./regimes.js";
export { cropFromTiff, fetchSclCrop, maybeSignHref } from "./scl.js";
export {
  DEFAULT_CATALOG,
  DEFAULT_COLLECTION,
  parseBBox,
  parseSearchResponse,
  search,
  validateBBox,
} from "./stac.js";
export * from "./types.js";
