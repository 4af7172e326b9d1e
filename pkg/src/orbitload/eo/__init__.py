"""EO semantic-reduction pipeline: class raster -> cloud mask -> compact artifacts."""

from .mask import (
    CloudMask,
    Regime,
    classify_regime,
    cloud_fraction,
    connected_components,
    derive_cloud_mask,
    largest_deck_fraction,
)
from .contours import (
    CoordinateSpace,
    PolygonRings,
    VectorPolygons,
    extract_contours,
    rasterize_polygons,
    transform_to_geo,
)
from .patches import PatchGrid, patch_polygons
from .artifacts import (
    ArtifactFormat,
    decode_compact,
    geojson_feature_collection,
    serialize_artifact,
    write_artifact,
)
from .report import ReductionReport, RegimeSummary, batch_summary, reduction_report

__all__ = [
    "ArtifactFormat",
    "CloudMask",
    "CoordinateSpace",
    "PatchGrid",
    "PolygonRings",
    "ReductionReport",
    "Regime",
    "RegimeSummary",
    "VectorPolygons",
    "batch_summary",
    "classify_regime",
    "cloud_fraction",
    "connected_components",
    "decode_compact",
    "derive_cloud_mask",
    "extract_contours",
    "geojson_feature_collection",
    "largest_deck_fraction",
    "patch_polygons",
    "rasterize_polygons",
    "reduction_report",
    "serialize_artifact",
    "transform_to_geo",
    "write_artifact",
]
