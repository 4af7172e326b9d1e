"""Patch-grid artifacts: coarse cloud structure with predictable size."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mask import CloudMask


@dataclass
class PatchGrid:
    """Per-cell cloud flags on a regular grid over the source raster.

    Cells are ``cell_size_px`` squares; edge cells may be smaller and use
    their actual pixel count when thresholding.  The serialized size is a
    deterministic function of the grid dimensions alone.
    """

    cell_flags: np.ndarray
    cell_size_px: int
    threshold: float
    source_width: int
    source_height: int
    serialized_bytes: int | None = None

    @property
    def grid_cols(self) -> int:
        return self.cell_flags.shape[1]

    @property
    def grid_rows(self) -> int:
        return self.cell_flags.shape[0]

    @property
    def patch_count(self) -> int:
        return int(np.count_nonzero(self.cell_flags))

    def cell_bounds(self, row: int, col: int) -> tuple[int, int, int, int]:
        """Pixel-space (x0, y0, x1, y1) of a cell, clipped to the raster."""
        x0 = col * self.cell_size_px
        y0 = row * self.cell_size_px
        x1 = min(x0 + self.cell_size_px, self.source_width)
        y1 = min(y0 + self.cell_size_px, self.source_height)
        return x0, y0, x1, y1


def patch_polygons(mask: CloudMask, cell_size_px: int = 64, threshold: float = 0.5) -> PatchGrid:
    """Flag each grid cell whose cloudy fraction reaches ``threshold``."""
    if cell_size_px < 1:
        raise ValueError("cell_size_px must be >= 1")
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must be in (0, 1]")
    h, w = mask.flags.shape
    rows = -(-h // cell_size_px)
    cols = -(-w // cell_size_px)
    padded = np.zeros((rows * cell_size_px, cols * cell_size_px), dtype=np.int64)
    padded[:h, :w] = mask.flags
    sums = padded.reshape(rows, cell_size_px, cols, cell_size_px).sum(axis=(1, 3))
    row_px = np.minimum(np.arange(1, rows + 1) * cell_size_px, h) - np.arange(rows) * cell_size_px
    col_px = np.minimum(np.arange(1, cols + 1) * cell_size_px, w) - np.arange(cols) * cell_size_px
    counts = np.outer(row_px, col_px)
    flags = sums >= threshold * counts
    return PatchGrid(
        cell_flags=flags,
        cell_size_px=cell_size_px,
        threshold=float(threshold),
        source_width=w,
        source_height=h,
    )
