"""Artifact serialization: GeoJSON text and a compact binary layout.

GeoJSON output is a FeatureCollection of Polygon features (patch cells as
their bounding quadrilaterals), encoded deterministically (sorted keys,
compact separators, UTF-8).

Compact binary layouts, all little-endian:

Patch grid (magic ``OLPG``)::

    magic[4] | u16 version=1 | u32 source_width | u32 source_height |
    u32 cell_size_px | u32 grid_cols | u32 grid_rows | f64 threshold |
    ceil(grid_rows*grid_cols/8) flag bytes, row-major, LSB-first

Vector polygons (magic ``OLVP``), pixel space only::

    magic[4] | u16 version=1 | u32 polygon_count |
    per polygon: u32 ring_count (exterior first) |
    per ring: u32 vertex_count, then vertex_count (x, y) pairs where the
    first pair is absolute and the rest are deltas, each value
    zigzag-varint encoded; rings are stored closed (last vertex repeats
    the first).
"""

from __future__ import annotations

import struct
from enum import Enum

import numpy as np

from .._fileio import atomic_write_bytes, canonical_json
from .contours import CoordinateSpace, PolygonRings, VectorPolygons
from .patches import PatchGrid

PATCH_MAGIC = b"OLPG"
VECTOR_MAGIC = b"OLVP"
_FORMAT_VERSION = 1


class ArtifactFormat(Enum):
    GEOJSON_TEXT = "geojson"
    COMPACT_BINARY = "compact"


def serialize_artifact(artifact: VectorPolygons | PatchGrid, fmt: ArtifactFormat) -> bytes:
    """Encode the artifact; records ``serialized_bytes`` on it."""
    if not isinstance(fmt, ArtifactFormat):
        raise ValueError(f"unknown artifact format {fmt!r}")
    if fmt is ArtifactFormat.GEOJSON_TEXT:
        data = canonical_json(geojson_feature_collection(artifact)).encode("utf-8")
    else:
        data = encode_compact(artifact)
    artifact.serialized_bytes = len(data)
    return data


def write_artifact(path, artifact, fmt: ArtifactFormat) -> int:
    data = serialize_artifact(artifact, fmt)
    atomic_write_bytes(path, data)
    return len(data)


# --- GeoJSON -----------------------------------------------------------------

def geojson_feature_collection(artifact: VectorPolygons | PatchGrid) -> dict:
    if isinstance(artifact, VectorPolygons):
        features = [
            _polygon_feature(poly, {"component": i})
            for i, poly in enumerate(artifact.polygons, start=1)
        ]
    elif isinstance(artifact, PatchGrid):
        features = []
        for row, col in np.argwhere(artifact.cell_flags):
            x0, y0, x1, y1 = artifact.cell_bounds(int(row), int(col))
            ring = [[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]]
            features.append(
                {
                    "type": "Feature",
                    "geometry": {"type": "Polygon", "coordinates": [ring]},
                    "properties": {"cell_col": int(col), "cell_row": int(row)},
                }
            )
    else:
        raise ValueError(f"cannot serialize {type(artifact).__name__} as GeoJSON")
    return {"type": "FeatureCollection", "features": features}


def _polygon_feature(poly: PolygonRings, properties: dict) -> dict:
    def ring_coords(ring: np.ndarray) -> list:
        if np.issubdtype(ring.dtype, np.integer):
            return [[int(x), int(y)] for x, y in ring]
        return [[float(x), float(y)] for x, y in ring]

    coordinates = [ring_coords(poly.exterior)] + [ring_coords(h) for h in poly.holes]
    return {
        "type": "Feature",
        "geometry": {"type": "Polygon", "coordinates": coordinates},
        "properties": properties,
    }


# --- compact binary ----------------------------------------------------------

def _zigzag(value: int) -> int:
    return (value << 1) ^ (value >> 63)


def _unzigzag(value: int) -> int:
    return (value >> 1) ^ -(value & 1)


def _write_varint(out: bytearray, value: int) -> None:
    value = _zigzag(int(value))
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _read_varint(data: bytes, pos: int) -> tuple[int, int]:
    result = 0
    shift = 0
    while True:
        byte = data[pos]
        pos += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return _unzigzag(result), pos
        shift += 7


def encode_compact(artifact: VectorPolygons | PatchGrid) -> bytes:
    if isinstance(artifact, PatchGrid):
        header = PATCH_MAGIC + struct.pack(
            "<HIIIIId",
            _FORMAT_VERSION,
            artifact.source_width,
            artifact.source_height,
            artifact.cell_size_px,
            artifact.grid_cols,
            artifact.grid_rows,
            artifact.threshold,
        )
        flags = np.packbits(
            artifact.cell_flags.astype(np.uint8).ravel(), bitorder="little"
        ).tobytes()
        return header + flags
    if isinstance(artifact, VectorPolygons):
        if artifact.coordinate_space is not CoordinateSpace.PIXEL:
            raise ValueError("compact binary supports pixel-space polygons only")
        out = bytearray(VECTOR_MAGIC)
        out += struct.pack("<HI", _FORMAT_VERSION, len(artifact.polygons))
        for poly in artifact.polygons:
            rings = [poly.exterior] + list(poly.holes)
            out += struct.pack("<I", len(rings))
            for ring in rings:
                ints = np.rint(np.asarray(ring)).astype(np.int64)
                if not np.array_equal(ints, np.asarray(ring)):
                    raise ValueError("compact binary requires integer vertices")
                out += struct.pack("<I", len(ints))
                prev = (0, 0)
                for x, y in ints:
                    _write_varint(out, int(x) - prev[0])
                    _write_varint(out, int(y) - prev[1])
                    prev = (int(x), int(y))
        return bytes(out)
    raise ValueError(f"cannot encode {type(artifact).__name__} as compact binary")


def decode_compact(data: bytes) -> VectorPolygons | PatchGrid:
    magic = data[:4]
    if magic == PATCH_MAGIC:
        version, width, height, cell, cols, rows, threshold = struct.unpack_from("<HIIIIId", data, 4)
        if version != _FORMAT_VERSION:
            raise ValueError(f"unsupported patch-grid version {version}")
        offset = 4 + struct.calcsize("<HIIIIId")
        nbits = rows * cols
        nbytes = (nbits + 7) // 8
        raw = np.frombuffer(data[offset:offset + nbytes], dtype=np.uint8)
        if raw.size != nbytes:
            raise ValueError("truncated patch-grid payload")
        bits = np.unpackbits(raw, bitorder="little")[:nbits].astype(bool)
        grid = PatchGrid(
            cell_flags=bits.reshape(rows, cols),
            cell_size_px=cell,
            threshold=threshold,
            source_width=width,
            source_height=height,
        )
        grid.serialized_bytes = len(data)
        return grid
    if magic == VECTOR_MAGIC:
        version, poly_count = struct.unpack_from("<HI", data, 4)
        if version != _FORMAT_VERSION:
            raise ValueError(f"unsupported vector-polygon version {version}")
        pos = 4 + struct.calcsize("<HI")
        polygons = []
        for _ in range(poly_count):
            (ring_count,) = struct.unpack_from("<I", data, pos)
            pos += 4
            rings = []
            for _ in range(ring_count):
                (vertex_count,) = struct.unpack_from("<I", data, pos)
                pos += 4
                verts = np.empty((vertex_count, 2), dtype=np.int64)
                x = y = 0
                for i in range(vertex_count):
                    dx, pos = _read_varint(data, pos)
                    dy, pos = _read_varint(data, pos)
                    x += dx
                    y += dy
                    verts[i] = (x, y)
                rings.append(verts)
            polygons.append(PolygonRings(exterior=rings[0], holes=rings[1:]))
        result = VectorPolygons(polygons=polygons, coordinate_space=CoordinateSpace.PIXEL)
        result.serialized_bytes = len(data)
        return result
    raise ValueError(f"unknown compact artifact magic {magic!r}")
