from dataclasses import dataclass

import numpy as np

from lasq.errors import InvalidInputError, ShapeError
from lasq.imageio.image import check_image
from lasq.numerics.kernels import avg_pool2, bilinear_resize, bilinear_resize_adjoint


@dataclass(frozen=True)
class EncoderConfig:
    k: int = 3
    channels: int = 3

    def __post_init__(self):
        if self.k < 0:
            raise InvalidInputError('Encoder stages k (%s) must be non-negative' % self.k)
        if self.channels != 3:
            raise InvalidInputError('The pooling encoder passes RGB through, channels must be 3, got %s' % self.channels)


    def latent_shape(self, rows, cols):
        '''
            (rows / 2^k, cols / 2^k, C), raising unless both divide evenly
        '''

        factor = 2**self.k
        if rows % factor or cols % factor:
            raise ShapeError('Image %dx%d is not divisible by 2^k = %d' % (rows, cols, factor))
        return rows // factor, cols // factor, self.channels


def encode(img, cfg):
    '''
        k rounds of 2x2 average pooling per channel
    '''

    img = check_image(img)
    cfg.latent_shape(*img.shape[:2])

    lat = img
    for _ in range(cfg.k):
        lat = avg_pool2(lat)
    return lat


def decode_unclamped(lat, cfg):
    '''
        k rounds of corner-aligned bilinear doubling
    '''

    lat = np.asarray(lat, dtype=np.float64)
    if lat.ndim != 3 or lat.shape[2] != cfg.channels:
        raise ShapeError('Latent must have shape (rows, cols, %d), got %s' % (cfg.channels, lat.shape))

    out = lat
    for _ in range(cfg.k):
        out = bilinear_resize(out, 2 * out.shape[0], 2 * out.shape[1])
    return out


def decode(lat, cfg):
    return np.clip(decode_unclamped(lat, cfg), 0.0, 1.0)


def decode_backward(grad_img, lat, cfg):
    '''
        Gradient with respect to the latent of a loss on decode(lat)

        The clamp passes gradient only where the upsampled value lies
        strictly inside [0, 1].
    '''

    upsampled = decode_unclamped(lat, cfg)
    grad = np.where((upsampled > 0.0) & (upsampled < 1.0), grad_img, 0.0)

    # walk the upsampling chain backwards
    shapes = [lat.shape[:2]]
    for _ in range(cfg.k):
        shapes.append((2 * shapes[-1][0], 2 * shapes[-1][1]))

    for rows, cols in reversed(shapes[:-1]):
        grad = bilinear_resize_adjoint(grad, rows, cols)

    return grad
