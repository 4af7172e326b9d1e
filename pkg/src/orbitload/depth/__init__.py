"""Multi-pass stereo depth-proxy pipeline: features -> geometry -> disparity -> products."""

from .normalize import normalize_radiometric
from .features import Feature, Keypoint, descriptor_array, detect_features
from .matching import MatchPair, hamming_distances, match_features
from .geometry import (
    GeometryModel,
    estimate_geometry,
    estimate_homography_dlt,
    symmetric_transfer_error,
    warp_align,
)
from .disparity import DisparityMap, compute_disparity, filter_disparity
from .products import (
    DerivedProducts,
    decode_products,
    package_products,
    reduction_percent,
)

__all__ = [
    "DerivedProducts",
    "DisparityMap",
    "Feature",
    "GeometryModel",
    "Keypoint",
    "MatchPair",
    "compute_disparity",
    "decode_products",
    "descriptor_array",
    "detect_features",
    "estimate_geometry",
    "estimate_homography_dlt",
    "filter_disparity",
    "hamming_distances",
    "match_features",
    "normalize_radiometric",
    "package_products",
    "reduction_percent",
    "symmetric_transfer_error",
    "warp_align",
]
