"""Shared synthetic-data helpers and the acceptance summary hook."""

from __future__ import annotations

import numpy as np
import pytest
from scipy import ndimage

from orbitload.raster import ImageTile

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def record_acceptance(name: str) -> None:
    _ACCEPTANCE_RESULTS.append((name, "PASS"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    reports = terminalreporter.stats.get("passed", []) + terminalreporter.stats.get("failed", [])
    lines = []
    for rep in reports:
        if "test_acceptance" in rep.nodeid and rep.when == "call":
            name = rep.nodeid.split("::")[-1].replace("test_", "", 1)
            lines.append(f"ACCEPTANCE {name}: {'PASS' if rep.passed else 'FAIL'}")
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)


def random_blob_mask(rng: np.random.Generator, height: int, width: int, density: float | None = None) -> np.ndarray:
    """Random smoothed-noise blobs thresholded to roughly ``density``."""
    if density is None:
        density = rng.uniform(0.05, 0.9)
    field = ndimage.uniform_filter(rng.random((height, width)), size=max(3, min(height, width) // 8))
    cut = np.quantile(field, 1.0 - density)
    return field > cut


def textured_pair(
    rng: np.random.Generator, size: int, shift: int, noise_sigma: float = 2.0
) -> tuple[ImageTile, ImageTile]:
    """Two crops of one textured field, the second displaced +x by ``shift``.

    Matching content sits ``shift`` pixels further right in the second
    tile, i.e. ground-truth disparity is +shift everywhere.
    """
    base = ndimage.uniform_filter(rng.random((size, size + shift)) * 255.0, 3)
    base = np.clip(base * 1.4 - 40.0, 0, 255)
    a = base[:, shift:].copy()
    b = base[:, :size] + rng.normal(0.0, noise_sigma, (size, size))
    return (
        ImageTile(intensities=a.astype(np.uint8)),
        ImageTile(intensities=np.clip(b, 0, 255).astype(np.uint8)),
    )
