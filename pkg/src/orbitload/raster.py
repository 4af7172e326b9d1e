"""Shared raster types plus PGM and raster-container I/O.

Two on-disk forms are supported, both bit-exact:

* binary PGM (``P5``), 8-bit, or 16-bit big-endian per the PGM convention;
* the toolkit's raster container: a JSON sidecar describing a row-major
  raw binary file (see ``data/raster-container.schema.json``).  uint16
  containers are little-endian.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._fileio import atomic_write_bytes, pretty_json

CONTAINER_VERSION = 1


@dataclass
class SceneRaster:
    """A class-coded pixel grid standing in for a raw acquisition.

    ``raw_byte_size`` is the size of the source payload this raster
    represents (for reduction accounting), at minimum one byte per pixel.
    """

    pixel_classes: np.ndarray
    pixel_size_m: float | None = None
    geo_transform: tuple[float, ...] | None = None
    raw_byte_size: int | None = None

    def __post_init__(self):
        arr = np.asarray(self.pixel_classes)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("pixel_classes must be a nonempty 2-D array")
        if arr.dtype != np.uint8:
            if not np.issubdtype(arr.dtype, np.integer):
                raise ValueError("pixel_classes must be integer class codes")
            if arr.min() < 0 or arr.max() > 255:
                raise ValueError("class codes must fit in 8 bits")
            arr = arr.astype(np.uint8)
        self.pixel_classes = arr
        if self.raw_byte_size is None:
            self.raw_byte_size = arr.size
        if self.raw_byte_size < arr.size:
            raise ValueError(
                f"raw_byte_size {self.raw_byte_size} smaller than one byte per pixel ({arr.size})"
            )
        if self.geo_transform is not None:
            self.geo_transform = tuple(float(c) for c in self.geo_transform)
            if len(self.geo_transform) != 6:
                raise ValueError("geo_transform must have six coefficients")

    @property
    def width(self) -> int:
        return self.pixel_classes.shape[1]

    @property
    def height(self) -> int:
        return self.pixel_classes.shape[0]


@dataclass
class ImageTile:
    """A grayscale tile (8- or 16-bit) with optional per-pixel validity."""

    intensities: np.ndarray
    source_bytes: int | None = None
    valid: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.asarray(self.intensities)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("intensities must be a nonempty 2-D array")
        if arr.dtype not in (np.uint8, np.uint16):
            raise ValueError(f"intensities must be uint8 or uint16, got {arr.dtype}")
        self.intensities = arr
        if self.source_bytes is None:
            self.source_bytes = arr.nbytes
        if self.valid is not None and self.valid.shape != arr.shape:
            raise ValueError("validity mask shape must match intensities")

    @property
    def width(self) -> int:
        return self.intensities.shape[1]

    @property
    def height(self) -> int:
        return self.intensities.shape[0]

    @property
    def max_value(self) -> int:
        return 255 if self.intensities.dtype == np.uint8 else 65535


# --- PGM -------------------------------------------------------------------

def read_pgm(path: str | Path) -> np.ndarray:
    """Read a binary (P5) PGM; >255 maxval decodes as big-endian uint16."""
    data = Path(path).read_bytes()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    fields: list[int] = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        if not token.isdigit():
            raise ValueError(f"{path}: malformed PGM header near byte {start}")
        fields.append(int(token))
    pos += 1  # single whitespace after maxval
    width, height, maxval = fields
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise ValueError(f"{path}: invalid PGM dimensions {width}x{height} maxval {maxval}")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = width * height
    raw = data[pos:pos + count * dtype.itemsize]
    if len(raw) != count * dtype.itemsize:
        raise ValueError(f"{path}: truncated PGM payload")
    arr = np.frombuffer(raw, dtype=dtype).reshape(height, width)
    return arr.astype(np.uint16) if maxval > 255 else arr.copy()


def write_pgm(path: str | Path, array: np.ndarray) -> None:
    arr = np.asarray(array)
    if arr.ndim != 2 or arr.dtype not in (np.uint8, np.uint16):
        raise ValueError("PGM output requires a 2-D uint8 or uint16 array")
    maxval = 255 if arr.dtype == np.uint8 else 65535
    header = f"P5\n{arr.shape[1]} {arr.shape[0]}\n{maxval}\n".encode("ascii")
    payload = arr.tobytes() if arr.dtype == np.uint8 else arr.astype(">u2").tobytes()
    atomic_write_bytes(path, header + payload)


# --- raster container --------------------------------------------------------

def write_container(
    path: str | Path,
    array: np.ndarray,
    *,
    kind: str = "class_codes",
    class_semantics: dict[str, str] | None = None,
    pixel_size_m: float | None = None,
    geo_transform: tuple[float, ...] | None = None,
    raw_byte_size: int | None = None,
) -> Path:
    """Write the JSON sidecar at ``path`` and the raw data next to it.

    The binary file shares the sidecar's stem with a ``.bin`` suffix.
    Returns the sidecar path.
    """
    path = Path(path)
    arr = np.asarray(array)
    if arr.ndim != 2 or arr.dtype not in (np.uint8, np.uint16):
        raise ValueError("container requires a 2-D uint8 or uint16 array")
    if kind not in ("class_codes", "intensity"):
        raise ValueError(f"unknown container kind {kind!r}")
    data_file = path.stem + ".bin"
    payload = arr.tobytes() if arr.dtype == np.uint8 else arr.astype("<u2").tobytes()
    sidecar = {
        "container_version": CONTAINER_VERSION,
        "width": int(arr.shape[1]),
        "height": int(arr.shape[0]),
        "dtype": str(arr.dtype),
        "kind": kind,
        "class_semantics": class_semantics,
        "pixel_size_m": pixel_size_m,
        "geo_transform": list(geo_transform) if geo_transform is not None else None,
        "raw_byte_size": int(raw_byte_size if raw_byte_size is not None else arr.size * arr.itemsize),
        "data_file": data_file,
    }
    atomic_write_bytes(path.with_name(data_file), payload)
    atomic_write_bytes(path, pretty_json(sidecar).encode("utf-8"))
    return path


def read_container(path: str | Path) -> tuple[np.ndarray, dict]:
    """Read a raster container; returns (array, sidecar dict)."""
    path = Path(path)
    with open(path, "rb") as fh:
        meta = json.load(fh)
    for key in ("container_version", "width", "height", "dtype", "kind", "raw_byte_size", "data_file"):
        if key not in meta:
            raise ValueError(f"{path}: container sidecar missing {key!r}")
    if meta["container_version"] != CONTAINER_VERSION:
        raise ValueError(f"{path}: unsupported container_version {meta['container_version']}")
    if meta["dtype"] not in ("uint8", "uint16"):
        raise ValueError(f"{path}: unsupported dtype {meta['dtype']}")
    width, height = int(meta["width"]), int(meta["height"])
    if width < 1 or height < 1:
        raise ValueError(f"{path}: invalid dimensions {width}x{height}")
    dtype = np.dtype("u1") if meta["dtype"] == "uint8" else np.dtype("<u2")
    raw = (path.parent / meta["data_file"]).read_bytes()
    expected = width * height * dtype.itemsize
    if len(raw) != expected:
        raise ValueError(
            f"{path}: data file has {len(raw)} bytes, expected {expected}"
        )
    arr = np.frombuffer(raw, dtype=dtype).reshape(height, width)
    if meta["dtype"] == "uint16":
        arr = arr.astype(np.uint16)
    else:
        arr = arr.copy()
    return arr, meta


def load_scene_raster(path: str | Path) -> SceneRaster:
    """Load a SceneRaster from a PGM file or a container sidecar."""
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        arr = read_pgm(path)
        if arr.dtype != np.uint8:
            raise ValueError(f"{path}: class rasters must be 8-bit")
        return SceneRaster(pixel_classes=arr, raw_byte_size=path.stat().st_size)
    arr, meta = read_container(path)
    if arr.dtype != np.uint8:
        raise ValueError(f"{path}: class rasters must be 8-bit")
    geo = meta.get("geo_transform")
    return SceneRaster(
        pixel_classes=arr,
        pixel_size_m=meta.get("pixel_size_m"),
        geo_transform=tuple(geo) if geo else None,
        raw_byte_size=int(meta["raw_byte_size"]),
    )


def load_image_tile(path: str | Path) -> ImageTile:
    """Load an ImageTile from a PGM file or a container sidecar."""
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        return ImageTile(intensities=read_pgm(path), source_bytes=path.stat().st_size)
    arr, meta = read_container(path)
    return ImageTile(intensities=arr, source_bytes=int(meta["raw_byte_size"]))
