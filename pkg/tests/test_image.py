import os

import numpy as np
import pytest

from lasq.errors import (
    InvalidInputError,
    MalformedHeaderError,
    MissingFileError,
    ShapeError,
    TruncatedImageError,
    UnsupportedFormatError,
    UnwritablePathError,
)
from lasq.imageio.image import check_image, load_image, luminance, quantize, rgb_to_yuv, save_image, yuv_to_rgb


def quantized(img, bit_depth=8):
    return quantize(img, bit_depth) / (2.0**bit_depth - 1)


class TestCheckImage:

    def test_accepts_valid(self, random_image):
        assert check_image(random_image).dtype == np.float64

    @pytest.mark.parametrize('shape', [(4, 4), (4, 4, 4), (0, 4, 3)])
    def test_rejects_shape(self, shape):
        with pytest.raises(ShapeError):
            check_image(np.zeros(shape))

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidInputError):
            check_image(np.full((2, 2, 3), 1.5))

    def test_rejects_nan(self):
        img = np.zeros((2, 2, 3))
        img[0, 0, 0] = np.nan
        with pytest.raises(InvalidInputError):
            check_image(img)


class TestQuantize:

    def test_rounds_half_away_from_zero(self):
        values = np.array([0.5, 1.49 / 255, 1.0])
        np.testing.assert_array_equal(quantize(values, 8), [128, 1, 255])

    def test_bad_depth(self):
        with pytest.raises(InvalidInputError):
            quantize(np.zeros(3), 12)


class TestPpm:

    @pytest.mark.parametrize('bit_depth', [8, 16])
    def test_round_trip(self, tmp_path, random_image, bit_depth):
        path = os.path.join(tmp_path, 'img.ppm')
        save_image(random_image, path, bit_depth=bit_depth)

        loaded = load_image(path)
        np.testing.assert_array_equal(loaded, quantized(random_image, bit_depth))

    def test_saved_bytes_are_stable(self, tmp_path, random_image):
        first = os.path.join(tmp_path, 'a.ppm')
        second = os.path.join(tmp_path, 'b.ppm')
        save_image(random_image, first)
        save_image(load_image(first), second)

        with open(first, 'rb') as a, open(second, 'rb') as b:
            assert a.read() == b.read()

    def test_header_comments(self, tmp_path):
        path = os.path.join(tmp_path, 'comment.ppm')
        with open(path, 'wb') as f:
            f.write(b'P6\n# made by hand\n2 1\n255\n' + bytes([0, 128, 255, 255, 0, 0]))

        img = load_image(path)
        assert img.shape == (1, 2, 3)
        np.testing.assert_allclose(img[0, 1], [1.0, 0.0, 0.0])

    def test_missing_file(self, tmp_path):
        with pytest.raises(MissingFileError):
            load_image(os.path.join(tmp_path, 'nothing.ppm'))

    def test_malformed_header(self, tmp_path):
        path = os.path.join(tmp_path, 'bad.ppm')
        with open(path, 'wb') as f:
            f.write(b'P6\nwide tall\n255\n')
        with pytest.raises(MalformedHeaderError):
            load_image(path)

    def test_truncated_body(self, tmp_path):
        path = os.path.join(tmp_path, 'short.ppm')
        with open(path, 'wb') as f:
            f.write(b'P6\n4 4\n255\n' + bytes(10))
        with pytest.raises(TruncatedImageError):
            load_image(path)

    def test_unsupported_maxval(self, tmp_path):
        path = os.path.join(tmp_path, 'maxval.ppm')
        with open(path, 'wb') as f:
            f.write(b'P6\n1 1\n100\n' + bytes(3))
        with pytest.raises(UnsupportedFormatError):
            load_image(path)

    def test_unknown_format(self, tmp_path):
        path = os.path.join(tmp_path, 'text.ppm')
        with open(path, 'w') as f:
            f.write('not an image')
        with pytest.raises(UnsupportedFormatError):
            load_image(path)

    def test_unwritable(self, tmp_path, random_image):
        with pytest.raises(UnwritablePathError):
            save_image(random_image, os.path.join(tmp_path, 'missing', 'dir', 'img.ppm'))


class TestPng:

    def test_round_trip(self, tmp_path, random_image):
        pytest.importorskip('cv2')
        path = os.path.join(tmp_path, 'img.png')
        save_image(random_image, path)
        np.testing.assert_array_equal(load_image(path), quantized(random_image))

    def test_sixteen_bit_round_trip(self, tmp_path, random_image):
        pytest.importorskip('cv2')
        path = os.path.join(tmp_path, 'img16.png')
        save_image(random_image, path, bit_depth=16)
        np.testing.assert_array_equal(load_image(path), quantized(random_image, 16))


class TestColour:

    def test_yuv_inverse(self, random_image):
        y, u, v = rgb_to_yuv(random_image)
        np.testing.assert_allclose(yuv_to_rgb(y, u, v, clamp=False), random_image, atol=1e-12)

    def test_gray_has_no_chroma(self):
        img = np.full((3, 3, 3), 0.4)
        y, u, v = rgb_to_yuv(img)
        np.testing.assert_allclose(y, 0.4)
        np.testing.assert_allclose(u, 0.0, atol=1e-15)
        np.testing.assert_allclose(v, 0.0, atol=1e-15)

    def test_luminance_weights(self):
        img = np.zeros((1, 3, 3))
        img[0, 0, 0] = img[0, 1, 1] = img[0, 2, 2] = 1.0
        np.testing.assert_allclose(luminance(img)[0], [0.299, 0.587, 0.114])

    def test_plane_mismatch(self):
        with pytest.raises(ShapeError):
            yuv_to_rgb(np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)))
