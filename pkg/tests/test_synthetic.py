import numpy as np
import pytest

from lasq.characterise.synthetic import (
    DARKEN_EXPONENT,
    darken,
    power_law_pair,
    synthetic_ground_truth,
    synthetic_pairs,
)
from lasq.errors import InvalidInputError
from lasq.imageio.image import check_image, luminance


class TestSynthetic:

    @pytest.mark.parametrize('index', range(10))
    def test_mid_tone_range(self, index):
        truth = check_image(synthetic_ground_truth(index, size=32))
        assert 0.3 < truth.min() and truth.max() < 0.61

    def test_indices_differ(self):
        assert not np.allclose(synthetic_ground_truth(0), synthetic_ground_truth(1))

    def test_pairs_are_darkened(self):
        pairs = synthetic_pairs(3, size=8)
        assert len(pairs) == 3
        for dark, truth in pairs:
            np.testing.assert_allclose(dark, truth**DARKEN_EXPONENT)
            assert luminance(dark).mean() < 0.3

    def test_darken_exponent(self):
        assert darken(np.array([0.5]), 2.0)[0] == pytest.approx(0.25)

    def test_power_law_pair(self):
        low, normal = power_law_pair(0.5, size=4)
        assert low.shape == (4, 4, 3)
        np.testing.assert_allclose(normal, np.sqrt(low))
        assert low.min() > 0.0 and low.max() < 1.0

    def test_invalid(self):
        with pytest.raises(InvalidInputError):
            synthetic_ground_truth(0, size=1)
        with pytest.raises(InvalidInputError):
            power_law_pair(0.0)
