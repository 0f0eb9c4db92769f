import numpy as np
import pytest

from lasq.denoiser.codec import EncoderConfig, decode, decode_backward, decode_unclamped, encode
from lasq.errors import InvalidInputError, ShapeError


def ramp(size):
    values = np.linspace(0.0, 1.0, size)
    grid = 0.5 * (values[:, None] + values[None, :])
    return np.repeat(grid[:, :, None], 3, axis=2)


class TestEncoderConfig:

    def test_latent_shape(self):
        assert EncoderConfig(k=3).latent_shape(64, 32) == (8, 4, 3)

    def test_not_divisible(self):
        with pytest.raises(ShapeError):
            EncoderConfig(k=2).latent_shape(10, 8)

    @pytest.mark.parametrize('kwargs', [{'k': -1}, {'channels': 4}])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidInputError):
            EncoderConfig(**kwargs)


class TestEncodeDecode:

    def test_constant_image(self):
        cfg = EncoderConfig(k=2)
        lat = encode(np.full((8, 8, 3), 0.3), cfg)
        assert lat.shape == (2, 2, 3)
        np.testing.assert_allclose(lat, 0.3)
        np.testing.assert_allclose(decode(lat, cfg), 0.3)

    def test_no_stages_is_identity(self, random_image):
        cfg = EncoderConfig(k=0)
        np.testing.assert_array_equal(decode(encode(random_image, cfg), cfg), random_image)

    def test_preserves_mean(self, random_image):
        assert encode(random_image, EncoderConfig(k=2)).mean() == pytest.approx(random_image.mean())

    def test_smooth_round_trip(self):
        img = ramp(32)
        cfg = EncoderConfig(k=1)
        assert np.max(np.abs(decode(encode(img, cfg), cfg) - img)) < 0.03

    def test_decode_clamps(self):
        lat = np.full((2, 2, 3), 1.5)
        assert decode(lat, EncoderConfig(k=1)).max() == 1.0
        assert decode_unclamped(lat, EncoderConfig(k=1)).max() == pytest.approx(1.5)

    def test_latent_shape_checked(self):
        with pytest.raises(ShapeError):
            decode(np.zeros((2, 2, 4)), EncoderConfig(k=1))


class TestDecodeBackward:

    def test_adjoint_inside_unit_interval(self, np_rng):
        cfg = EncoderConfig(k=2)
        lat = np_rng.uniform(0.2, 0.8, size=(3, 2, 3))
        grad = np_rng.normal(size=(12, 8, 3))

        lhs = np.sum(decode(lat, cfg) * grad)
        rhs = np.sum(lat * decode_backward(grad, lat, cfg))
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_clamped_values_pass_no_gradient(self):
        cfg = EncoderConfig(k=1)
        lat = np.full((2, 2, 3), 2.0)
        np.testing.assert_array_equal(decode_backward(np.ones((4, 4, 3)), lat, cfg), 0.0)
