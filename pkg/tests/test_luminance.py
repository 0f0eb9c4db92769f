import numpy as np
import pytest

from lasq.enhance.luminance import (
    GuidedFilterParams,
    Region,
    full_region,
    guided_filter_coefficients,
    guided_filter_luminance,
    region_stats,
)
from lasq.errors import InvalidInputError
from lasq.numerics.kernels import box_moments


def window(x, i, j, radius):
    return x[max(i - radius, 0):i + radius + 1, max(j - radius, 0):j + radius + 1]


def guided_filter_loops(y, radius, eps):
    '''
        Direct per-pixel evaluation of both guided filter passes
    '''

    rows, cols = y.shape
    a = np.zeros_like(y)
    b = np.zeros_like(y)
    for i in range(rows):
        for j in range(cols):
            w = window(y, i, j, radius)
            a[i, j] = w.var() / (w.var() + eps)
            b[i, j] = w.mean() * (1 - a[i, j])

    g = np.zeros_like(y)
    for i in range(rows):
        for j in range(cols):
            g[i, j] = window(a, i, j, radius).mean() * y[i, j] + window(b, i, j, radius).mean()
    return np.clip(g, 0.0, 1.0)


class TestGuidedFilterParams:

    def test_defaults(self):
        params = GuidedFilterParams()
        assert (params.radius, params.eps_gf) == (8, 0.01)

    @pytest.mark.parametrize('radius, eps', [(0, 0.01), (4, 0.0), (4, -1.0)])
    def test_invalid(self, radius, eps):
        with pytest.raises(InvalidInputError):
            GuidedFilterParams(radius=radius, eps_gf=eps)


class TestGuidedFilter:

    def test_matches_loop_oracle(self, np_rng):
        params = GuidedFilterParams(radius=2, eps_gf=0.01)
        for _ in range(50):
            y = np_rng.uniform(size=(16, 16))
            np.testing.assert_allclose(guided_filter_luminance(y, params), guided_filter_loops(y, 2, 0.01), atol=1e-10)

    def test_radius_larger_than_image(self, np_rng):
        y = np_rng.uniform(size=(5, 7))
        np.testing.assert_allclose(guided_filter_luminance(y, GuidedFilterParams(radius=8)),
                                   guided_filter_loops(y, 8, 0.01), atol=1e-10)

    def test_vanishing_eps_returns_input(self, np_rng):
        y = np_rng.uniform(size=(8, 8))
        g = guided_filter_luminance(y, GuidedFilterParams(radius=2, eps_gf=1e-12))
        assert np.max(np.abs(g - y)) < 1e-6

    @pytest.mark.parametrize('value', [0.3, 0.35, 0.7])
    def test_constant_image_is_exact(self, value):
        g = guided_filter_luminance(np.full((17, 13), value))
        assert np.all(g == value)

    def test_coefficients_in_unit_interval(self, np_rng):
        y = np_rng.uniform(size=(12, 12))
        y[:, :6] = 0.4
        a, _ = guided_filter_coefficients(y, GuidedFilterParams(radius=2, eps_gf=0.01))
        assert a.min() >= 0.0 and a.max() < 1.0

    def test_larger_eps_moves_towards_window_mean(self, np_rng):
        y = np_rng.uniform(size=(16, 16))
        mean, _ = box_moments(y, 2)

        distances = [np.linalg.norm(guided_filter_luminance(y, GuidedFilterParams(radius=2, eps_gf=eps)) - mean)
                     for eps in [1e-4, 1e-3, 1e-2, 1e-1]]
        assert all(far > near for far, near in zip(distances, distances[1:]))

    def test_output_in_unit_interval(self, np_rng):
        g = guided_filter_luminance(np_rng.uniform(size=(20, 12)))
        assert g.min() >= 0.0 and g.max() <= 1.0

    def test_small_eps_keeps_edges(self):
        y = np.zeros((8, 8))
        y[:, 4:] = 1.0
        g = guided_filter_luminance(y, GuidedFilterParams(radius=2, eps_gf=1e-6))
        np.testing.assert_allclose(g, y, atol=1e-3)


class TestRegion:

    def test_shape_and_size(self):
        region = Region(1, 4, 2, 7)
        assert region.shape == (3, 5)
        assert region.size == 15

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            Region(2, 2, 0, 3).check(4, 4)

    def test_out_of_bounds_rejected(self):
        with pytest.raises(InvalidInputError):
            Region(0, 5, 0, 3).check(4, 4)


class TestRegionStats:

    def test_known_values(self):
        g = np.array([[0.1, 0.3], [0.5, 0.7]])
        stats = region_stats(g, full_region(2, 2))
        assert stats.g_p == pytest.approx(0.4)
        assert stats.var_g == pytest.approx(0.05)

    def test_sub_region(self):
        g = np.array([[0.1, 0.3], [0.5, 0.7]])
        stats = region_stats(g, Region(1, 2, 0, 2))
        assert stats.g_p == pytest.approx(0.6)
        assert stats.var_g == pytest.approx(0.01)

    def test_single_pixel_has_zero_variance(self):
        stats = region_stats(np.array([[0.2, 0.9]]), Region(0, 1, 1, 2))
        assert stats.var_g == 0.0
        assert stats.g_p == pytest.approx(0.9)

    def test_two_point_region(self):
        stats = region_stats(np.array([[0.0, 1.0]]), full_region(1, 2))
        assert (stats.g_p, stats.var_g) == (0.5, 0.25)

    def test_full_image_matches_global_statistics(self, np_rng):
        g = np_rng.uniform(size=(11, 7))
        stats = region_stats(g, full_region(11, 7))
        assert stats.g_p == pytest.approx(g.mean(), abs=1e-12)
        assert stats.var_g == pytest.approx(g.var(), abs=1e-12)

    def test_union_of_equal_regions(self, np_rng):
        g = np_rng.uniform(size=(6, 8))
        halves = [region_stats(g, Region(0, 6, 0, 4)).g_p, region_stats(g, Region(0, 6, 4, 8)).g_p]
        assert region_stats(g, full_region(6, 8)).g_p == pytest.approx(np.mean(halves), abs=1e-12)
