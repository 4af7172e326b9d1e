import numpy as np
import pytest

from conftest import textured_pair
from orbitload.depth import (
    GeometryModel,
    compute_disparity,
    decode_products,
    filter_disparity,
    package_products,
    reduction_percent,
)
from orbitload.depth.disparity import DisparityMap


def _model():
    return GeometryModel(np.eye(3), np.arange(8), 1.0, 3.0)


def _random_map(rng, h=96, w=96, coverage=0.4):
    values = rng.normal(3.0, 1.5, (h, w)).astype(np.float32)
    valid = rng.random((h, w)) < coverage
    values[~valid] = 0.0
    return DisparityMap(disparity_px=values, valid=valid)


class TestPackage:
    def test_empty_map_is_header_plus_model(self):
        dmap = DisparityMap(
            disparity_px=np.zeros((64, 64), np.float32), valid=np.zeros((64, 64), bool)
        )
        products = package_products(dmap, _model())
        assert products.tile_count == 0
        assert len(products.sparse_points) == 0
        assert products.total_bytes < 256

    def test_total_bytes_is_exact_payload_length(self):
        rng = np.random.default_rng(111)
        products = package_products(_random_map(rng), _model())
        assert products.total_bytes == len(products.payload)

    def test_quantizer_contract(self):
        rng = np.random.default_rng(112)
        for bits in (8, 16):
            dmap = _random_map(rng)
            products = package_products(dmap, _model(), quantization_bits=bits)
            decoded, _, _, _ = decode_products(products.payload)
            step = (products.d_max - products.d_min) / ((1 << bits) - 1)
            err = np.abs(decoded.disparity_px[dmap.valid] - dmap.disparity_px[dmap.valid])
            assert err.max() <= step / 2 + 1e-6
            assert np.array_equal(decoded.valid, dmap.valid)

    def test_sparse_points_on_stride_grid(self):
        rng = np.random.default_rng(113)
        dmap = _random_map(rng)
        stride = 8
        products = package_products(dmap, _model(), stride=stride)
        expected = [
            (x, y, dmap.disparity_px[y, x])
            for y in range(0, 96, stride)
            for x in range(0, 96, stride)
            if dmap.valid[y, x]
        ]
        got = [(int(x), int(y), d) for x, y, d in products.sparse_points]
        assert len(got) == len(expected)
        for (gx, gy, gd), (ex, ey, ed) in zip(got, expected):
            assert (gx, gy) == (ex, ey)
            assert gd == pytest.approx(ed, abs=1e-6)

    def test_model_round_trips(self):
        rng = np.random.default_rng(114)
        h = np.array([[1.01, 0.002, 5.5], [-0.001, 0.99, -2.25], [1e-6, 0.0, 1.0]])
        model = GeometryModel(h, np.arange(10), 0.9, 3.0)
        products = package_products(_random_map(rng), model)
        _, decoded_h, _, _ = decode_products(products.payload)
        assert np.array_equal(decoded_h, h)

    def test_constant_disparity_degenerate_span(self):
        values = np.full((32, 32), 4.0, np.float32)
        valid = np.ones((32, 32), bool)
        products = package_products(DisparityMap(disparity_px=values, valid=valid), _model())
        decoded, _, _, _ = decode_products(products.payload)
        assert np.allclose(decoded.disparity_px[decoded.valid], 4.0)

    def test_parameter_validation(self):
        dmap = DisparityMap(np.zeros((4, 4), np.float32), np.ones((4, 4), bool))
        with pytest.raises(ValueError):
            package_products(dmap, _model(), quantization_bits=12)
        with pytest.raises(ValueError):
            package_products(dmap, _model(), stride=0)

    def test_deterministic(self):
        rng = np.random.default_rng(115)
        dmap = _random_map(rng)
        p1 = package_products(dmap, _model())
        p2 = package_products(dmap, _model())
        assert p1.payload == p2.payload

    def test_planar_shift_pipeline_under_two_percent(self):
        rng = np.random.default_rng(116)
        a, b = textured_pair(rng, 512, 5)
        raw_bytes = a.intensities.nbytes + b.intensities.nbytes
        model = GeometryModel(
            np.array([[1.0, 0.0, 5.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]),
            np.arange(100), 1.0, 3.0,
        )
        from orbitload.depth import warp_align

        aligned = warp_align(b, model)
        dmap = compute_disparity(a, aligned, 9, 16)
        filtered, _ = filter_disparity(dmap, 1.0)
        products = package_products(filtered, model)
        assert products.total_bytes <= 0.02 * raw_bytes


class TestReductionPercent:
    def test_reference_figures(self):
        value = reduction_percent(305.99e6, 1.57e6)
        assert value == pytest.approx(99.487, abs=0.001)
        assert round(value, 2) == 99.49

    def test_trivial_cases(self):
        assert reduction_percent(100, 100) == 0.0
        assert reduction_percent(100, 50) == 50.0

    def test_domain(self):
        with pytest.raises(ValueError):
            reduction_percent(0, 1)
        with pytest.raises(ValueError):
            reduction_percent(10, -1)
