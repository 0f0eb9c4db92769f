import os
import re

import numpy as np

from lasq.errors import (
    InvalidInputError,
    MalformedHeaderError,
    MissingFileError,
    ShapeError,
    TruncatedImageError,
    UnsupportedFormatError,
    UnwritablePathError,
)


# full-range BT.601 coefficients
KR, KG, KB = 0.299, 0.587, 0.114
U_SCALE = 0.492
V_SCALE = 0.877

PNG_SIGNATURE = b'\x89PNG\r\n\x1a\n'


def check_image(img, name='image'):
    '''
        Return img as a (rows, cols, 3) float64 array with entries in [0, 1]
    '''

    img = np.asarray(img, dtype=np.float64)

    if img.ndim != 3 or img.shape[2] != 3 or img.shape[0] < 1 or img.shape[1] < 1:
        raise ShapeError('The %s must have shape (rows, cols, 3), got %s' % (name, img.shape))
    if not np.all(np.isfinite(img)):
        raise InvalidInputError('The %s contains non-finite values' % name)
    if img.min() < 0.0 or img.max() > 1.0:
        raise InvalidInputError('The %s has values outside [0, 1] (%g, %g)' % (name, img.min(), img.max()))

    return img


def quantize(img, bit_depth):
    '''
        Quantise [0, 1] values to integers with round-half-away-from-zero
    '''

    if bit_depth not in (8, 16):
        raise InvalidInputError('Bit depth (%s) must be 8 or 16' % bit_depth)

    scale = 2**bit_depth - 1
    levels = np.floor(np.asarray(img, dtype=np.float64) * scale + 0.5)
    return np.clip(levels, 0, scale).astype(np.uint16 if bit_depth == 16 else np.uint8)


def _read_ppm(data, path):

    # header: magic, width, height, maxval separated by whitespace with comments
    header = re.match(rb'P6((?:\s+|#[^\n]*\n)+)(\d+)((?:\s+|#[^\n]*\n)+)(\d+)((?:\s+|#[^\n]*\n)+)(\d+)\s', data)
    if header is None:
        raise MalformedHeaderError('Could not parse the PPM header of (%s)' % path)

    cols, rows, maxval = int(header.group(2)), int(header.group(4)), int(header.group(6))
    if cols < 1 or rows < 1:
        raise MalformedHeaderError('The PPM (%s) declares an empty image %dx%d' % (path, cols, rows))

    if maxval == 255:
        dtype, bit_depth = np.dtype('u1'), 8
    elif maxval == 65535:
        dtype, bit_depth = np.dtype('>u2'), 16
    else:
        raise UnsupportedFormatError('The PPM (%s) has maxval %d, only 255 and 65535 are supported' % (path, maxval))

    # the sample data starts after the single whitespace following maxval
    body = data[header.end():]
    expected = rows * cols * 3 * dtype.itemsize
    if len(body) < expected:
        raise TruncatedImageError('The PPM (%s) body holds %d bytes, expected %d' % (path, len(body), expected))

    samples = np.frombuffer(body[:expected], dtype=dtype).reshape(rows, cols, 3)
    return samples.astype(np.float64) / (2**bit_depth - 1)


def _read_png(path):

    import cv2

    samples = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if samples is None:
        raise MalformedHeaderError('The PNG codec could not decode (%s)' % path)

    if samples.dtype == np.uint8:
        scale = 255.0
    elif samples.dtype == np.uint16:
        scale = 65535.0
    else:
        raise UnsupportedFormatError('The PNG (%s) has unsupported sample type %s' % (path, samples.dtype))

    if samples.ndim == 2:
        samples = np.repeat(samples[:, :, None], 3, axis=2)
    elif samples.shape[2] == 3:
        samples = samples[:, :, ::-1]
    else:
        raise UnsupportedFormatError('The PNG (%s) has %d channels, only RGB is supported' % (path, samples.shape[2]))

    return samples.astype(np.float64) / scale


def load_image(path):
    '''
        Load a binary PPM (P6) or PNG image into [0, 1] floats

        A sample v stored at bit depth d maps to v / (2^d - 1).
    '''

    if not os.path.isfile(path):
        raise MissingFileError('The image file (%s) does not exist' % path)

    with open(path, 'rb') as f:
        data = f.read()

    if data.startswith(b'P6'):
        img = _read_ppm(data, path)
    elif data.startswith(PNG_SIGNATURE):
        img = _read_png(path)
    else:
        raise UnsupportedFormatError('The file (%s) is neither a binary PPM nor a PNG' % path)

    return check_image(img)


def save_image(img, path, bit_depth=8):
    '''
        Save an image as PNG when the path ends in .png, otherwise as binary PPM
    '''

    img = check_image(img)
    samples = quantize(img, bit_depth)
    rows, cols = img.shape[:2]

    if str(path).lower().endswith('.png'):

        import cv2

        try:
            written = cv2.imwrite(str(path), np.ascontiguousarray(samples[:, :, ::-1]))
        except cv2.error as error:
            raise UnwritablePathError('Could not write (%s): %s' % (path, error))
        if not written:
            raise UnwritablePathError('Could not write (%s)' % path)
        return

    header = b'P6\n%d %d\n%d\n' % (cols, rows, 2**bit_depth - 1)
    body = samples.astype('>u2').tobytes() if bit_depth == 16 else samples.tobytes()

    try:
        with open(path, 'wb') as f:
            f.write(header + body)
    except OSError as error:
        raise UnwritablePathError('Could not write (%s): %s' % (path, error))


def rgb_to_yuv(img):
    '''
        Full-range BT.601 luma and scaled colour differences
    '''

    img = np.asarray(img, dtype=np.float64)
    r, g, b = img[:, :, 0], img[:, :, 1], img[:, :, 2]

    y = KR * r + KG * g + KB * b
    u = U_SCALE * (b - y)
    v = V_SCALE * (r - y)

    return y, u, v


def yuv_to_rgb(y, u, v, clamp=True):
    '''
        Exact algebraic inverse of rgb_to_yuv, clamped to [0, 1] unless clamp is False
    '''

    y = np.asarray(y, dtype=np.float64)
    if np.shape(u) != y.shape or np.shape(v) != y.shape:
        raise ShapeError('Y, U and V planes must share a shape')

    r = y + np.asarray(v) / V_SCALE
    b = y + np.asarray(u) / U_SCALE
    g = (y - KR * r - KB * b) / KG

    img = np.stack([r, g, b], axis=2)
    if clamp:
        img = np.clip(img, 0.0, 1.0)
    return img


def luminance(img):
    '''
        Y channel of an image
    '''

    return rgb_to_yuv(img)[0]
