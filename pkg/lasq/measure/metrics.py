import math
from dataclasses import dataclass

import numpy as np

from lasq.errors import InvalidInputError, ShapeError
from lasq.imageio.image import check_image, luminance
from lasq.numerics.kernels import conv2d


SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_C1 = 0.01**2
SSIM_C2 = 0.03**2


@dataclass(frozen=True)
class MetricReport:
    psnr_db: float
    ssim: float

    def as_csv(self):
        return '%.6f,%.6f' % (self.psnr_db, self.ssim)


def _check_pair(a, b):

    a = check_image(a, 'first image')
    b = check_image(b, 'second image')
    if a.shape != b.shape:
        raise ShapeError('Images differ in shape: %s and %s' % (a.shape, b.shape))
    return a, b


def psnr(a, b):
    '''
        Peak signal-to-noise ratio in dB with a peak of 1

        Identical images return +inf.
    '''

    a, b = _check_pair(a, b)

    mse = float(np.mean((a - b)**2))
    if mse == 0.0:
        return math.inf

    return 10.0 * math.log10(1.0 / mse)


def gaussian_window(size=SSIM_WINDOW, sigma=SSIM_SIGMA):
    '''
        Truncated 2D Gaussian renormalised to unit sum
    '''

    offsets = np.arange(size) - (size - 1) / 2.0
    profile = np.exp(-0.5 * (offsets / sigma)**2)
    window = np.outer(profile, profile)
    return window / window.sum()


def ssim(a, b):
    '''
        Single-scale structural similarity of the Y channels

        Local statistics use the 11x11 Gaussian window over every position
        where it fits inside the image; the result is the mean of the map.
    '''

    a, b = _check_pair(a, b)

    rows, cols = a.shape[:2]
    if min(rows, cols) < SSIM_WINDOW:
        raise InvalidInputError('SSIM needs images of at least %dx%d, got %dx%d' % (SSIM_WINDOW, SSIM_WINDOW, rows, cols))

    x = luminance(a)
    y = luminance(b)
    window = gaussian_window()

    # valid filtering only
    def _filter(grid):
        return conv2d(grid, window, pad=(0, 0))

    mu_x = _filter(x)
    mu_y = _filter(y)

    var_x = _filter(x * x) - mu_x**2
    var_y = _filter(y * y) - mu_y**2
    cov = _filter(x * y) - mu_x * mu_y

    numerator = (2.0 * mu_x * mu_y + SSIM_C1) * (2.0 * cov + SSIM_C2)
    denominator = (mu_x**2 + mu_y**2 + SSIM_C1) * (var_x + var_y + SSIM_C2)

    return float(np.mean(numerator / denominator))


def measure_pair(a, b):
    return MetricReport(psnr_db=psnr(a, b), ssim=ssim(a, b))
