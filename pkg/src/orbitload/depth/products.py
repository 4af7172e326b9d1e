"""Compact packaging of disparity and geometry into one downlinkable file.

Container layout (magic ``OLDP``, all little-endian)::

    magic[4] | u16 version=1 | u32 width | u32 height | u8 quant_bits |
    u16 stride | f64 d_min | f64 d_max | u16 tile_size | u32 tile_count |
    u32 sparse_count | 9 x f64 row-major homography |
    per tile: u16 tile_col | u16 tile_row | u32 blob_len | blob |
    per sparse point: u32 x | u32 y | f32 disparity

A tile blob is zlib level 6 over: packed validity bits (LSB-first,
row-major within the tile) followed by the quantized disparities (u8 or
little-endian u16, invalid pixels as 0).  Tiles with no valid pixels are
skipped, so an empty map packages to header + model only.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .disparity import DisparityMap
from .geometry import GeometryModel

PRODUCTS_MAGIC = b"OLDP"
_VERSION = 1
_TILE_SIZE = 256
_ZLIB_LEVEL = 6
_HEADER = "<HIIBHddHII"


@dataclass
class DerivedProducts:
    """Serialized derived geometry plus its exact byte accounting."""

    payload: bytes
    tile_count: int
    sparse_points: np.ndarray  # (N, 3) float32: x, y, disparity
    model: GeometryModel
    quant_bits: int
    d_min: float
    d_max: float
    stride: int

    @property
    def total_bytes(self) -> int:
        return len(self.payload)


def _quantize(values: np.ndarray, d_min: float, d_max: float, bits: int) -> np.ndarray:
    levels = (1 << bits) - 1
    span = d_max - d_min
    if span <= 0:
        q = np.zeros(values.shape, dtype=np.uint16)
    else:
        q = np.rint((values - d_min) / span * levels)
        q = np.clip(q, 0, levels).astype(np.uint16)
    return q.astype(np.uint8) if bits == 8 else q


def _dequantize(q: np.ndarray, d_min: float, d_max: float, bits: int) -> np.ndarray:
    levels = (1 << bits) - 1
    span = d_max - d_min
    if span <= 0:
        return np.full(q.shape, d_min, dtype=np.float32)
    return (d_min + q.astype(np.float64) / levels * span).astype(np.float32)


def package_products(
    dmap: DisparityMap,
    model: GeometryModel,
    quantization_bits: int = 16,
    stride: int = 8,
) -> DerivedProducts:
    """Quantize, tile-compress, and sparse-sample a disparity map.

    Disparity is linearly quantized over the valid range; decoding is
    within one quantization step of the input.  Sparse points sample the
    valid pixels on a ``stride`` grid.  ``total_bytes`` is the exact size
    of the serialized container.
    """
    if quantization_bits not in (8, 16):
        raise ValueError("quantization_bits must be 8 or 16")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    h, w = dmap.disparity_px.shape
    valid = dmap.valid
    any_valid = bool(valid.any())
    d_min = float(dmap.disparity_px[valid].min()) if any_valid else 0.0
    d_max = float(dmap.disparity_px[valid].max()) if any_valid else 0.0
    quant = _quantize(dmap.disparity_px, d_min, d_max, quantization_bits)
    quant[~valid] = 0

    tiles: list[bytes] = []
    for ty in range(0, h, _TILE_SIZE):
        for tx in range(0, w, _TILE_SIZE):
            tile_valid = valid[ty:ty + _TILE_SIZE, tx:tx + _TILE_SIZE]
            if not tile_valid.any():
                continue
            tile_quant = quant[ty:ty + _TILE_SIZE, tx:tx + _TILE_SIZE]
            raw = np.packbits(tile_valid.astype(np.uint8).ravel(), bitorder="little").tobytes()
            if quantization_bits == 8:
                raw += tile_quant.astype(np.uint8).tobytes()
            else:
                raw += tile_quant.astype("<u2").tobytes()
            blob = zlib.compress(raw, _ZLIB_LEVEL)
            tiles.append(
                struct.pack("<HHI", tx // _TILE_SIZE, ty // _TILE_SIZE, len(blob)) + blob
            )

    sy, sx = np.mgrid[0:h:stride, 0:w:stride]
    keep = valid[sy, sx]
    points = np.column_stack(
        [
            sx[keep].astype(np.float32),
            sy[keep].astype(np.float32),
            dmap.disparity_px[sy[keep], sx[keep]].astype(np.float32),
        ]
    ).reshape(-1, 3)

    header = PRODUCTS_MAGIC + struct.pack(
        _HEADER,
        _VERSION,
        w,
        h,
        quantization_bits,
        stride,
        d_min,
        d_max,
        _TILE_SIZE,
        len(tiles),
        points.shape[0],
    )
    model_bytes = struct.pack("<9d", *model.homography.ravel())
    sparse_bytes = b"".join(
        struct.pack("<IIf", int(x), int(y), float(d)) for x, y, d in points
    )
    payload = header + model_bytes + b"".join(tiles) + sparse_bytes
    return DerivedProducts(
        payload=payload,
        tile_count=len(tiles),
        sparse_points=points,
        model=model,
        quant_bits=quantization_bits,
        d_min=d_min,
        d_max=d_max,
        stride=stride,
    )


def decode_products(payload: bytes) -> tuple[DisparityMap, np.ndarray, np.ndarray, dict]:
    """Decode a products container.

    Returns (dequantized disparity map, homography, sparse points, meta).
    """
    if payload[:4] != PRODUCTS_MAGIC:
        raise ValueError(f"unknown products magic {payload[:4]!r}")
    fields = struct.unpack_from(_HEADER, payload, 4)
    version, w, h, bits, stride, d_min, d_max, tile_size, tile_count, sparse_count = fields
    if version != _VERSION:
        raise ValueError(f"unsupported products version {version}")
    pos = 4 + struct.calcsize(_HEADER)
    homography = np.array(struct.unpack_from("<9d", payload, pos)).reshape(3, 3)
    pos += 72
    disparity = np.zeros((h, w), dtype=np.float32)
    valid = np.zeros((h, w), dtype=bool)
    for _ in range(tile_count):
        tx, ty, blob_len = struct.unpack_from("<HHI", payload, pos)
        pos += 8
        raw = zlib.decompress(payload[pos:pos + blob_len])
        pos += blob_len
        x0, y0 = tx * tile_size, ty * tile_size
        th = min(tile_size, h - y0)
        tw = min(tile_size, w - x0)
        nbits = th * tw
        nbytes = (nbits + 7) // 8
        tile_valid = np.unpackbits(
            np.frombuffer(raw[:nbytes], dtype=np.uint8), bitorder="little"
        )[:nbits].astype(bool).reshape(th, tw)
        qdtype = np.dtype("u1") if bits == 8 else np.dtype("<u2")
        quant = np.frombuffer(raw[nbytes:], dtype=qdtype).reshape(th, tw)
        values = _dequantize(quant, d_min, d_max, bits)
        disparity[y0:y0 + th, x0:x0 + tw] = np.where(tile_valid, values, 0.0)
        valid[y0:y0 + th, x0:x0 + tw] = tile_valid
    points = np.zeros((sparse_count, 3), dtype=np.float32)
    for i in range(sparse_count):
        x, y, d = struct.unpack_from("<IIf", payload, pos)
        pos += 12
        points[i] = (x, y, d)
    meta = {
        "width": w,
        "height": h,
        "quant_bits": bits,
        "stride": stride,
        "d_min": d_min,
        "d_max": d_max,
        "tile_count": tile_count,
    }
    return DisparityMap(disparity_px=disparity, valid=valid), homography, points, meta


def reduction_percent(raw_bytes: float, derived_bytes: float) -> float:
    """Percentage reduction from raw payload to derived products."""
    if raw_bytes <= 0:
        raise ValueError("raw_bytes must be > 0")
    if derived_bytes < 0:
        raise ValueError("derived_bytes must be >= 0")
    return (1.0 - derived_bytes / raw_bytes) * 100.0
