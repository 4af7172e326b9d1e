"""Vector cloud polygons traced along pixel boundaries.

Contours follow the cracks between cloudy and clear pixels on the
pixel-corner lattice, so a ring encloses exactly the pixel squares of its
component.  Rasterizing the rings back (even-odd fill over pixel centers)
reproduces the component pixel set: exactly for hole-free components, and
exactly for all components when holes are emitted as reversed inner rings.

Vertices are corner coordinates: pixel (i, j) spans x in [i, i+1] and
y in [j, j+1].  Outer rings start at the top-left corner of their
component's first row-major pixel and proceed +x first; collinear
vertices are merged.  With 8-connected components a ring may touch (but
never cross) itself at a corner where two pixels meet diagonally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import ndimage

from .mask import CloudMask, connected_components

# Directions on the corner lattice, y down: E, S, W, N.
_DIRS = ((1, 0), (0, 1), (-1, 0), (0, -1))
# Pixel offsets of the front-left / front-right squares at an arrival
# corner (x, y), indexed by direction; pixel (i, j) has top-left corner (i, j).
_FRONT_LEFT = ((0, -1), (0, 0), (-1, 0), (-1, -1))
_FRONT_RIGHT = ((0, 0), (-1, 0), (-1, -1), (0, -1))


class CoordinateSpace(Enum):
    PIXEL = "pixel"
    GEO = "geo"


@dataclass
class PolygonRings:
    """One polygon: a closed exterior ring plus optional hole rings."""

    exterior: np.ndarray
    holes: list[np.ndarray] = field(default_factory=list)


@dataclass
class VectorPolygons:
    """Contour polygons for the components of a cloud mask."""

    polygons: list[PolygonRings]
    coordinate_space: CoordinateSpace = CoordinateSpace.PIXEL
    serialized_bytes: int | None = None

    @property
    def rings(self) -> list[np.ndarray]:
        """All rings (exterior first per polygon, then its holes)."""
        out: list[np.ndarray] = []
        for poly in self.polygons:
            out.append(poly.exterior)
            out.extend(poly.holes)
        return out


def extract_contours(
    mask: CloudMask, connectivity: int = 8, include_holes: bool = False
) -> VectorPolygons:
    """One outer ring per connected component; holes omitted unless asked."""
    labels, sizes = connected_components(mask, connectivity)
    polygons: list[PolygonRings] = []
    if sizes.size == 0:
        return VectorPolygons(polygons=polygons)
    slices = ndimage.find_objects(labels)
    for index, box in enumerate(slices, start=1):
        component = labels[box] == index
        y0, x0 = box[0].start, box[1].start
        ring = _trace_outer(component, connectivity)
        ring[:, 0] += x0
        ring[:, 1] += y0
        holes: list[np.ndarray] = []
        if include_holes:
            for hole_ring in _trace_holes(component, connectivity):
                hole_ring[:, 0] += x0
                hole_ring[:, 1] += y0
                holes.append(hole_ring)
        polygons.append(PolygonRings(exterior=ring, holes=holes))
    return VectorPolygons(polygons=polygons)


def _trace_outer(component: np.ndarray, connectivity: int) -> np.ndarray:
    h, w = component.shape
    start_flat = int(np.argmax(component))
    sy, sx = divmod(start_flat, w)

    def filled(px: int, py: int) -> bool:
        return 0 <= px < w and 0 <= py < h and bool(component[py, px])

    join_on_pinch = connectivity == 8
    start = (sx, sy)
    d = 0  # heading E along the top edge of the start pixel
    v = start
    vertices = [start]
    limit = 4 * (w + 1) * (h + 1) + 4
    for _ in range(limit):
        v = (v[0] + _DIRS[d][0], v[1] + _DIRS[d][1])
        flo = _FRONT_LEFT[d]
        fro = _FRONT_RIGHT[d]
        fl = filled(v[0] + flo[0], v[1] + flo[1])
        fr = filled(v[0] + fro[0], v[1] + fro[1])
        if fl and fr:
            nd = (d - 1) % 4
        elif fr:
            nd = d
        elif fl:
            nd = (d - 1) % 4 if join_on_pinch else (d + 1) % 4
        else:
            nd = (d + 1) % 4
        if v == start and nd == 0:
            break
        if nd != d:
            vertices.append(v)
        d = nd
    else:
        raise RuntimeError("contour tracing failed to close")
    vertices.append(start)
    return np.asarray(vertices, dtype=np.int64)


def _trace_holes(component: np.ndarray, connectivity: int) -> list[np.ndarray]:
    # Complement connectivity is dual to the foreground's.
    if connectivity == 8:
        fill_structure = None  # 4-connected background
        hole_conn = 4
    else:
        fill_structure = np.ones((3, 3), dtype=bool)
        hole_conn = 8
    filled = ndimage.binary_fill_holes(component, structure=fill_structure)
    holes_mask = filled & ~component
    if not holes_mask.any():
        return []
    rings = []
    hole_polys = extract_contours(CloudMask(flags=holes_mask), connectivity=hole_conn)
    for poly in hole_polys.polygons:
        rings.append(poly.exterior[::-1].copy())  # reversed orientation
    return rings


def rasterize_polygons(polys: VectorPolygons, width: int, height: int) -> np.ndarray:
    """Even-odd fill of the rings over pixel centers -> boolean mask.

    Exact for the integer rectilinear rings this module produces: a pixel
    center (i+0.5, j+0.5) is inside iff an odd number of vertical ring
    edges lie strictly to its left at that row.
    """
    if polys.coordinate_space is not CoordinateSpace.PIXEL:
        raise ValueError("rasterization requires pixel-space polygons")
    toggles = np.zeros((height, width), dtype=bool)
    for ring in polys.rings:
        arr = np.asarray(ring)
        ints = np.rint(arr).astype(np.int64)
        if not np.array_equal(ints, arr):
            raise ValueError("rasterization requires integer corner coordinates")
        for (x1, y1), (x2, y2) in zip(ints[:-1], ints[1:]):
            if x1 != x2:
                continue  # horizontal edges never cross a leftward ray
            if not 0 <= x1 < width:
                continue
            ylo, yhi = (y1, y2) if y1 < y2 else (y2, y1)
            ylo, yhi = max(ylo, 0), min(yhi, height)
            if ylo < yhi:
                toggles[ylo:yhi, x1] ^= True
    return np.logical_xor.accumulate(toggles, axis=1)


def transform_to_geo(polys: VectorPolygons, geo_transform: tuple[float, ...]) -> VectorPolygons:
    """Apply a 6-coefficient affine (origin/step form) to every vertex."""
    if len(geo_transform) != 6:
        raise ValueError("geo_transform must have six coefficients")
    if polys.coordinate_space is not CoordinateSpace.PIXEL:
        raise ValueError("polygons are already in geo coordinates")
    c0, a, b, f0, d, e = geo_transform

    def apply(ring: np.ndarray) -> np.ndarray:
        x = ring[:, 0].astype(np.float64)
        y = ring[:, 1].astype(np.float64)
        return np.column_stack([c0 + a * x + b * y, f0 + d * x + e * y])

    return VectorPolygons(
        polygons=[
            PolygonRings(exterior=apply(p.exterior), holes=[apply(h) for h in p.holes])
            for p in polys.polygons
        ],
        coordinate_space=CoordinateSpace.GEO,
    )
