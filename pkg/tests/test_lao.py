import math

import numpy as np
import pytest

from lasq.enhance.lao import (
    LaoParams,
    apply_gamma_map,
    apply_lao,
    compute_beta,
    compute_gamma,
    gamma_correct,
    image_gamma,
    pixel_gamma_map,
)
from lasq.enhance.luminance import Region, full_region
from lasq.errors import InvalidInputError


class TestLaoParams:

    def test_defaults(self):
        params = LaoParams()
        assert (params.alpha, params.eta, params.delta) == (0.15, 1.0, 0.01)

    @pytest.mark.parametrize('kwargs', [{'alpha': 0.0}, {'delta': -0.1}, {'eta': -1.0}])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidInputError):
            LaoParams(**kwargs)


class TestComputeGamma:

    def test_mid_gray_is_identity(self):
        params = LaoParams(alpha=0.5, eta=0.0)
        assert compute_gamma(0.5, 0.0, params) == pytest.approx(1.0)

    @pytest.mark.parametrize('g, expected', [(0.1, 3.03143), (0.85, 1.0)])
    def test_without_contrast_term(self, g, expected):
        assert compute_gamma(g, 0.0, LaoParams(eta=0.0)) == pytest.approx(expected, abs=1e-5)

    def test_known_value(self):
        expected = math.pow(0.15 + 0.2, 2 * 0.2 - 1 + 0.04 / 0.05)
        assert compute_beta(0.2, 0.04) == pytest.approx(2 * 0.2 - 1 + 0.8)
        assert compute_gamma(0.2, 0.04) == pytest.approx(expected)

    def test_dark_regions_brighten(self):
        for g in np.linspace(0.0, 0.49, 12):
            assert compute_gamma(g, 0.0) > 1.0

    def test_contrast_term_lowers_gamma(self):
        assert compute_gamma(0.2, 0.05) < compute_gamma(0.2, 0.0)

    def test_continuous_on_dense_grid(self):
        g = np.linspace(0.0, 1.0, 1001)
        steps = np.abs(np.diff(compute_gamma(g, 0.0)))

        assert np.all(steps[g[:-1] >= 0.05] < 0.05)

        # steepest at g = 0, where d(gamma)/dg = (2 ln alpha - 1/alpha) / alpha
        alpha = LaoParams().alpha
        slope = abs(2 * math.log(alpha) - 1 / alpha) / alpha
        assert steps.max() <= 1e-3 * slope


class TestPixelGammaMap:

    def test_bounds_and_mean(self, np_rng):
        g = np_rng.uniform(0.05, 0.4, size=(6, 5))
        gm = pixel_gamma_map(g)

        np.testing.assert_allclose(gm.grid, compute_gamma(g, 0.0))
        assert gm.gamma_min == pytest.approx(gm.grid.min())
        assert gm.gamma_max == pytest.approx(gm.grid.max())
        assert gm.gamma_min <= gm.gamma_0 <= gm.gamma_max
        assert not gm.is_constant

    def test_two_pixel_map(self):
        gm = pixel_gamma_map(np.array([[0.1, 0.85]]), LaoParams(eta=0.0))
        np.testing.assert_allclose(gm.grid, [[3.03143, 1.0]], atol=1e-5)
        assert gm.gamma_0 == pytest.approx(2.01571, abs=1e-5)

    def test_constant_map(self):
        gm = pixel_gamma_map(np.full((3, 3), 0.3))
        assert gm.is_constant
        assert gm.std == 0.0


class TestApplyLao:

    def test_identity(self, random_image):
        out = apply_lao(random_image, full_region(16, 16), 1.0)
        np.testing.assert_array_equal(out, random_image)
        assert out is not random_image

    def test_quarter_to_half(self):
        img = np.full((4, 4, 3), 0.25)
        np.testing.assert_allclose(apply_lao(img, full_region(4, 4), 2.0), 0.5)

    def test_only_the_region_changes(self, random_image):
        region = Region(2, 6, 3, 9)
        out = apply_lao(random_image, region, 2.2)

        mask = np.zeros((16, 16), dtype=bool)
        mask[region.slices] = True
        np.testing.assert_array_equal(out[~mask], random_image[~mask])
        np.testing.assert_allclose(out[mask], random_image[mask]**(1 / 2.2))

    def test_luma_mode_on_gray_matches_rgb(self):
        img = np.full((3, 3, 3), 0.2)
        rgb = apply_lao(img, full_region(3, 3), 1.8, channels='rgb')
        luma = apply_lao(img, full_region(3, 3), 1.8, channels='y')
        np.testing.assert_allclose(luma, rgb, atol=1e-12)

    @pytest.mark.parametrize('gamma', [0.0, -2.0])
    def test_non_positive_gamma(self, random_image, gamma):
        with pytest.raises(InvalidInputError):
            apply_lao(random_image, full_region(16, 16), gamma)

    def test_unknown_channel_mode(self, random_image):
        with pytest.raises(InvalidInputError):
            apply_lao(random_image, full_region(16, 16), 2.0, channels='hsv')

    def test_region_outside_image(self, random_image):
        with pytest.raises(InvalidInputError):
            apply_lao(random_image, Region(0, 20, 0, 4), 2.0)


class TestApplyGammaMap:

    def test_per_pixel(self):
        img = np.full((1, 2, 3), 0.25)
        out = apply_gamma_map(img, np.array([[1.0, 2.0]]))
        np.testing.assert_allclose(out[0, 0], 0.25)
        np.testing.assert_allclose(out[0, 1], 0.5)

    def test_gamma_correct_clips(self):
        np.testing.assert_allclose(gamma_correct(np.array([0.0, 1.0]), 3.0), [0.0, 1.0])


class TestImageGamma:

    def test_dark_image_brightens(self, np_rng):
        g = np_rng.uniform(0.05, 0.2, size=(8, 8))
        assert image_gamma(g) > 1.0

    def test_matches_region_formula(self):
        g = np.array([[0.1, 0.3], [0.5, 0.7]])
        assert image_gamma(g) == pytest.approx(compute_gamma(0.4, 0.05))
