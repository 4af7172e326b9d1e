"""Radiometric normalization for cross-date tiles."""

from __future__ import annotations

import numpy as np

from ..raster import ImageTile


def normalize_radiometric(
    tile: ImageTile, low_percentile: float = 2.0, high_percentile: float = 98.0
) -> ImageTile:
    """Linear stretch mapping the low/high percentiles to the full range.

    Values outside the percentile window clamp to the range ends.  A
    constant tile cannot be stretched; it is returned unchanged with
    ``meta["normalize"]["degenerate"] = True``.
    """
    data = tile.intensities
    lo, hi = np.percentile(data, [low_percentile, high_percentile])
    meta = dict(tile.meta)
    if hi <= lo:
        meta["normalize"] = {"degenerate": True, "low": float(lo), "high": float(hi)}
        return ImageTile(
            intensities=data.copy(),
            source_bytes=tile.source_bytes,
            valid=None if tile.valid is None else tile.valid.copy(),
            meta=meta,
        )
    out_max = float(tile.max_value)
    stretched = (data.astype(np.float64) - lo) * (out_max / (hi - lo))
    stretched = np.clip(np.rint(stretched), 0.0, out_max)
    meta["normalize"] = {"degenerate": False, "low": float(lo), "high": float(hi)}
    return ImageTile(
        intensities=stretched.astype(data.dtype),
        source_bytes=tile.source_bytes,
        valid=None if tile.valid is None else tile.valid.copy(),
        meta=meta,
    )
