"""Dense disparity by census-cost block matching.

The census transform encodes each pixel's window as "neighbor darker than
center" bits, so matching cost (Hamming distance between census codes) is
invariant to the illumination differences typical of multi-date imagery.
Matching searches horizontal offsets in [-max_disparity, +max_disparity],
refines the minimum by parabola fit, and invalidates pixels that have no
census texture or fail a left-right consistency check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..raster import ImageTile

_COST_INVALID = np.uint16(0xFFFF)
_BAND_ROWS = 256  # keeps per-band cost volumes modest on wide tiles


@dataclass
class DisparityMap:
    disparity_px: np.ndarray  # float32
    valid: np.ndarray  # bool

    def __post_init__(self):
        if self.disparity_px.shape != self.valid.shape:
            raise ValueError("disparity and validity shapes must match")

    @property
    def width(self) -> int:
        return self.disparity_px.shape[1]

    @property
    def height(self) -> int:
        return self.disparity_px.shape[0]

    @property
    def coverage(self) -> float:
        return float(np.count_nonzero(self.valid)) / self.valid.size


def census_transform(img: np.ndarray, window_px: int) -> np.ndarray:
    """Packed census codes, (H, W, ceil((window^2-1)/8)) uint8.

    Borders are edge-replicated so every pixel gets a code.
    """
    if window_px < 3 or window_px % 2 == 0:
        raise ValueError("window_px must be odd and >= 3")
    r = window_px // 2
    h, w = img.shape
    padded = np.pad(img, r, mode="edge")
    center = img
    bits = []
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            if dy == 0 and dx == 0:
                continue
            neighbor = padded[r + dy:r + dy + h, r + dx:r + dx + w]
            bits.append(neighbor < center)
    stacked = np.stack(bits, axis=2)
    return np.packbits(stacked, axis=2, bitorder="little")


def _cost_volume(census_ref: np.ndarray, census_other: np.ndarray, max_disparity: int) -> np.ndarray:
    """Cost (H, W, 2D+1) uint16; index k means disparity k - D."""
    h, w, _ = census_ref.shape
    volume = np.full((h, w, 2 * max_disparity + 1), _COST_INVALID, dtype=np.uint16)
    for k, d in enumerate(range(-max_disparity, max_disparity + 1)):
        lo = max(0, -d)
        hi = min(w, w - d)
        if lo >= hi:
            continue
        xor = census_ref[:, lo:hi, :] ^ census_other[:, lo + d:hi + d, :]
        volume[:, lo:hi, k] = np.bitwise_count(xor).sum(axis=2, dtype=np.uint16)
    return volume


def _best_disparity(volume: np.ndarray, max_disparity: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(integer disparity, subpixel disparity, validity) from a cost volume."""
    h, w, n = volume.shape
    best_k = np.argmin(volume, axis=2)
    rows, cols = np.mgrid[0:h, 0:w]
    best_cost = volume[rows, cols, best_k]
    valid = best_cost != _COST_INVALID
    # No census contrast anywhere on the search line means no texture signal.
    in_range = volume != _COST_INVALID
    spread = np.where(in_range, volume, 0).max(axis=2) > np.where(
        in_range, volume, _COST_INVALID
    ).min(axis=2)
    valid &= spread

    disparity = best_k.astype(np.float32) - max_disparity
    km = np.clip(best_k - 1, 0, n - 1)
    kp = np.clip(best_k + 1, 0, n - 1)
    c0 = best_cost.astype(np.float32)
    cm = volume[rows, cols, km].astype(np.float32)
    cp = volume[rows, cols, kp].astype(np.float32)
    interior = (best_k > 0) & (best_k < n - 1) & (cm != _COST_INVALID) & (cp != _COST_INVALID)
    denom = cm - 2.0 * c0 + cp
    with np.errstate(divide="ignore", invalid="ignore"):
        delta = np.where((denom > 0) & interior, (cm - cp) / (2.0 * denom), 0.0)
    delta = np.clip(delta, -0.5, 0.5)
    return best_k - max_disparity, disparity + delta.astype(np.float32), valid


def compute_disparity(
    reference: ImageTile,
    aligned: ImageTile,
    window_px: int = 9,
    max_disparity: int = 64,
    *,
    lr_check: bool = True,
    lr_tolerance_px: float = 1.0,
) -> DisparityMap:
    """Per-pixel horizontal disparity of ``aligned`` against ``reference``.

    Positive disparity means the matching content sits at larger x in the
    aligned tile.  The left-right consistency check (on by default, >1 px
    discrepancy) can be disabled to study the raw matcher output.
    """
    if reference.intensities.shape != aligned.intensities.shape:
        raise ValueError("reference and aligned tiles must have equal dimensions")
    if max_disparity < 1:
        raise ValueError("max_disparity must be >= 1")
    h, w = reference.intensities.shape
    band = max(_BAND_ROWS, 1)
    disparity = np.empty((h, w), dtype=np.float32)
    int_disp = np.empty((h, w), dtype=np.int64)
    valid = np.empty((h, w), dtype=bool)
    r = window_px // 2
    for start in range(0, h, band):
        stop = min(start + band, h)
        lo = max(0, start - r)
        hi = min(h, stop + r)
        ref_c = census_transform(reference.intensities[lo:hi], window_px)[start - lo:stop - lo]
        ali_c = census_transform(aligned.intensities[lo:hi], window_px)[start - lo:stop - lo]
        vol = _cost_volume(ref_c, ali_c, max_disparity)
        d_int, d_sub, ok = _best_disparity(vol, max_disparity)
        if lr_check:
            vol_r = _cost_volume(ali_c, ref_c, max_disparity)
            dr_int, _, ok_r = _best_disparity(vol_r, max_disparity)
            cols = np.arange(w)[None, :] + d_int
            cols_ok = (cols >= 0) & (cols < w)
            cols_c = np.clip(cols, 0, w - 1)
            rows = np.arange(d_int.shape[0])[:, None]
            back = dr_int[rows, cols_c]
            consistent = np.abs(d_int + back) <= lr_tolerance_px
            ok &= cols_ok & consistent & ok_r[rows, cols_c]
        disparity[start:stop] = d_sub
        int_disp[start:stop] = d_int
        valid[start:stop] = ok
    if reference.valid is not None:
        valid &= reference.valid
    if aligned.valid is not None:
        cols = np.clip(np.arange(w)[None, :] + int_disp, 0, w - 1)
        valid &= aligned.valid[np.arange(h)[:, None], cols]
    disparity[~valid] = 0.0
    return DisparityMap(disparity_px=disparity, valid=valid)


def filter_disparity(dmap: DisparityMap, min_abs_px: float = 1.0) -> tuple[DisparityMap, float]:
    """Keep pixels with |disparity| strictly above ``min_abs_px``.

    ``min_abs_px = 0`` disables the magnitude filter entirely (validity is
    unchanged).  Returns the filtered map and its coverage fraction.
    """
    if min_abs_px < 0:
        raise ValueError("min_abs_px must be >= 0")
    if min_abs_px == 0:
        valid = dmap.valid.copy()
    else:
        valid = dmap.valid & (np.abs(dmap.disparity_px) > min_abs_px)
    disparity = np.where(valid, dmap.disparity_px, 0.0).astype(np.float32)
    filtered = DisparityMap(disparity_px=disparity, valid=valid)
    return filtered, filtered.coverage
