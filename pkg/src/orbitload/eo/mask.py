"""Cloud masking, regime bucketing, and connected-component statistics."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np
from scipy import ndimage

from ..config import default_config
from ..raster import SceneRaster

DEFAULT_CLOUD_CLASSES = frozenset({8, 9, 10})  # SCL cloud-medium, cloud-high, thin cirrus


class Regime(Enum):
    CLEAR = "clear"
    MIXED = "mixed"
    CLOUDY = "cloudy"
    UNBUCKETED = "unbucketed"


@dataclass
class CloudMask:
    """Binary per-pixel cloud flags derived from a class-coded raster."""

    flags: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.flags)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("flags must be a nonempty 2-D array")
        self.flags = arr.astype(bool)

    @property
    def width(self) -> int:
        return self.flags.shape[1]

    @property
    def height(self) -> int:
        return self.flags.shape[0]


def derive_cloud_mask(
    raster: SceneRaster, cloud_classes: Iterable[int] | None = None
) -> CloudMask:
    """Flag every pixel whose class code is in ``cloud_classes``.

    Defaults to the standard cloud/cirrus scene-classification codes
    {8, 9, 10}; the set is configurable (``eo.cloud_classes``).
    """
    classes = DEFAULT_CLOUD_CLASSES if cloud_classes is None else frozenset(int(c) for c in cloud_classes)
    if not classes:
        raise ValueError("cloud_classes must be nonempty")
    flags = np.isin(raster.pixel_classes, sorted(classes))
    return CloudMask(flags=flags)


def cloud_fraction(mask: CloudMask) -> float:
    """Cloudy pixels over total pixels."""
    return float(np.count_nonzero(mask.flags)) / mask.flags.size


def classify_regime(fraction: float, bounds: dict[str, tuple[float, float]] | None = None) -> Regime:
    """Bucket a cloud fraction into clear / mixed / cloudy.

    The buckets are closed intervals (defaults [0,0.1], [0.3,0.6],
    [0.7,0.9]) and deliberately non-exhaustive; fractions in the gaps
    return ``Regime.UNBUCKETED``.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"cloud fraction must be in [0, 1], got {fraction}")
    if bounds is None:
        bounds = default_config()["eo"]["regimes"]
    for name in ("clear", "mixed", "cloudy"):
        lo, hi = bounds[name]
        if lo <= fraction <= hi:
            return Regime(name)
    return Regime.UNBUCKETED


def connected_components(mask: CloudMask, connectivity: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Label cloudy components; returns (labels, sizes).

    Labels are int32, 0 for background, components numbered 1..n in
    row-major first-encounter order.  ``sizes[k-1]`` is the pixel count of
    label k, so sizes sum to the mask's cloudy-pixel count.
    """
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    structure = np.ones((3, 3), dtype=bool) if connectivity == 8 else None
    labels, count = ndimage.label(mask.flags, structure=structure)
    labels = labels.astype(np.int32)
    if count == 0:
        return labels, np.zeros(0, dtype=np.int64)
    labels = _renumber_first_encounter(labels, count)
    sizes = np.bincount(labels.ravel(), minlength=count + 1)[1:].astype(np.int64)
    return labels, sizes


def _renumber_first_encounter(labels: np.ndarray, count: int) -> np.ndarray:
    flat = labels.ravel()
    nonzero = flat[flat > 0]
    _, first_pos = np.unique(nonzero, return_index=True)
    order = np.argsort(first_pos, kind="stable")  # old label -> encounter rank
    remap = np.zeros(count + 1, dtype=np.int32)
    remap[1:][order] = np.arange(1, count + 1, dtype=np.int32)
    return remap[labels]


def largest_deck_fraction(sizes: np.ndarray) -> float:
    """Largest component's share of all cloudy pixels (0 when cloud-free)."""
    total = int(np.sum(sizes))
    if total == 0:
        return 0.0
    return float(np.max(sizes)) / total
