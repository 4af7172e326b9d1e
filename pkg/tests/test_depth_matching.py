import numpy as np
import pytest

from orbitload.depth import MatchPair, hamming_distances, match_features


def brute_force_matches(a: np.ndarray, b: np.ndarray, ratio: float) -> list[MatchPair]:
    """O(n^2) oracle with pure-Python popcounts."""
    out = []
    if b.shape[0] < 2:
        return out
    for i in range(a.shape[0]):
        dists = [
            sum(int(x).bit_count() for x in (a[i] ^ b[j]).tolist())
            for j in range(b.shape[0])
        ]
        order = sorted(range(len(dists)), key=lambda j: (dists[j], j))
        first, second = order[0], order[1]
        if dists[first] < ratio * dists[second]:
            out.append(MatchPair(i, first, dists[first]))
    return out


def random_descriptors(rng, n):
    return rng.integers(0, 256, (n, 32), dtype=np.uint8)


class TestHamming:
    def test_known_distances(self):
        a = np.zeros((1, 32), np.uint8)
        b = np.zeros((2, 32), np.uint8)
        b[1, 0] = 0b1011
        d = hamming_distances(a, b)
        assert d.tolist() == [[0, 3]]

    def test_symmetry_and_range(self):
        rng = np.random.default_rng(81)
        a = random_descriptors(rng, 40)
        d = hamming_distances(a, a)
        assert np.array_equal(d, d.T)
        assert d.max() <= 256
        assert np.all(np.diag(d) == 0)


class TestMatchFeatures:
    def test_identical_sets_all_match_at_zero(self):
        rng = np.random.default_rng(82)
        a = random_descriptors(rng, 30)
        matches = match_features(a, a.copy(), 0.75)
        assert len(matches) == 30
        assert all(m.index_a == m.index_b and m.distance == 0 for m in matches)

    def test_single_complement_never_matches(self):
        rng = np.random.default_rng(83)
        a = random_descriptors(rng, 1)
        b = (~a[0]).reshape(1, -1)
        for ratio in (0.1, 0.5, 0.99, 1.0):
            assert match_features(a, b, ratio) == []

    def test_empty_sides(self):
        rng = np.random.default_rng(84)
        a = random_descriptors(rng, 5)
        empty = np.zeros((0, 32), np.uint8)
        assert match_features(empty, a) == []
        assert match_features(a, empty) == []

    def test_matches_equal_brute_force_oracle(self):
        rng = np.random.default_rng(85)
        for _ in range(10):
            a = random_descriptors(rng, 50)
            b = random_descriptors(rng, 50)
            ratio = float(rng.choice([0.6, 0.75, 0.9, 1.0]))
            assert match_features(a, b, ratio) == brute_force_matches(a, b, ratio)

    def test_larger_set_against_oracle(self):
        rng = np.random.default_rng(86)
        a = random_descriptors(rng, 200)
        b = random_descriptors(rng, 180)
        assert match_features(a, b, 0.8) == brute_force_matches(a, b, 0.8)

    def test_tie_breaks_to_lowest_index(self):
        a = np.zeros((1, 32), np.uint8)
        b = np.zeros((3, 32), np.uint8)
        b[0, 0] = 0b1
        b[1] = 0  # distance 0, index 1
        b[2] = 0  # distance 0, index 2
        matches = match_features(a, b, 1.0)
        # nearest=index1 (d=0), second=index2 (d=0): 0 < ratio*0 fails -> no match
        assert matches == []
        b[2, 0] = 0b111
        matches = match_features(a, b, 1.0)
        assert matches == [MatchPair(0, 1, 0)]

    def test_ratio_validation(self):
        a = np.zeros((2, 32), np.uint8)
        with pytest.raises(ValueError):
            match_features(a, a, 0.0)
        with pytest.raises(ValueError):
            match_features(a, a, 1.5)
