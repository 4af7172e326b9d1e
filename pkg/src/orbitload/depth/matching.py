"""Descriptor matching by Hamming distance with a ratio test."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .features import descriptor_array

_CHUNK = 512


class MatchPair(NamedTuple):
    index_a: int
    index_b: int
    distance: int


def _as_descriptor_matrix(side) -> np.ndarray:
    if isinstance(side, np.ndarray):
        if side.ndim != 2 or side.dtype != np.uint8:
            raise ValueError("descriptor matrix must be (N, bytes) uint8")
        return side
    return descriptor_array(list(side))


def hamming_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise Hamming distances between packed descriptor rows."""
    out = np.empty((a.shape[0], b.shape[0]), dtype=np.uint16)
    for start in range(0, a.shape[0], _CHUNK):
        block = a[start:start + _CHUNK]
        xor = block[:, None, :] ^ b[None, :, :]
        out[start:start + _CHUNK] = np.bitwise_count(xor).sum(axis=2, dtype=np.uint16)
    return out


def match_features(a, b, ratio: float = 0.75) -> list[MatchPair]:
    """Nearest-neighbor matches from ``a`` into ``b`` passing the ratio test.

    A match is kept iff its nearest distance is strictly below ``ratio``
    times the second-nearest; distance ties resolve to the lowest index.
    Fewer than two candidates on the ``b`` side means distinctiveness
    cannot be established, so the result is empty.
    """
    if not 0.0 < ratio <= 1.0:
        raise ValueError("ratio must be in (0, 1]")
    da = _as_descriptor_matrix(a)
    db = _as_descriptor_matrix(b)
    if da.shape[0] == 0 or db.shape[0] < 2:
        return []
    matches: list[MatchPair] = []
    for start in range(0, da.shape[0], _CHUNK):
        block = da[start:start + _CHUNK]
        dist = hamming_distances(block, db)
        best = np.argmin(dist, axis=1)
        rows = np.arange(dist.shape[0])
        best_d = dist[rows, best].astype(np.float64)
        dist[rows, best] = np.iinfo(np.uint16).max
        second_d = dist.min(axis=1).astype(np.float64)
        keep = best_d < ratio * second_d
        for r in np.nonzero(keep)[0]:
            matches.append(MatchPair(start + int(r), int(best[r]), int(best_d[r])))
    return matches
