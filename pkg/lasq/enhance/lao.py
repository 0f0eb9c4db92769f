from dataclasses import dataclass

import numpy as np

from lasq.enhance.luminance import full_region, region_stats
from lasq.errors import InvalidInputError
from lasq.imageio.image import check_image, rgb_to_yuv, yuv_to_rgb
from lasq.numerics.kernels import check_grid


@dataclass(frozen=True)
class LaoParams:
    alpha: float = 0.15
    eta: float = 1.0
    delta: float = 0.01

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidInputError('LAO alpha (%s) must be positive' % self.alpha)
        if not self.delta > 0:
            raise InvalidInputError('LAO delta (%s) must be positive' % self.delta)
        if not self.eta >= 0:
            raise InvalidInputError('LAO eta (%s) must be non-negative' % self.eta)


@dataclass(frozen=True)
class GammaMap:
    grid: np.ndarray
    gamma_min: float
    gamma_max: float
    gamma_0: float

    @property
    def std(self):
        return float(self.grid.std())

    @property
    def is_constant(self):
        return self.gamma_max == self.gamma_min


def compute_beta(g_p, var_g, params=None):
    '''
        Exponent of the luminance adaptation operator

            beta = 2 G - 1 + eta * var / (var + delta)
    '''

    params = params or LaoParams()
    return 2.0 * g_p - 1.0 + params.eta * var_g / (var_g + params.delta)


def compute_gamma(g_p, var_g, params=None):
    '''
        Luminance adaptation operator gamma = (alpha + G)^beta
    '''

    params = params or LaoParams()
    base = params.alpha + g_p
    if np.any(np.asarray(base) <= 0):
        raise InvalidInputError('alpha + G_P must be positive, got %s' % base)

    return np.power(base, compute_beta(g_p, var_g, params))


def pixel_gamma_map(g, params=None):
    '''
        Per-pixel gamma treating every pixel as its own 1x1 region (var = 0)
    '''

    params = params or LaoParams()
    g = check_grid(g, 'luminance map')

    grid = compute_gamma(g, 0.0, params)

    gamma_min = float(grid.min())
    gamma_max = float(grid.max())

    # the mean may land a rounding step outside the extremes
    gamma_0 = min(max(float(grid.mean()), gamma_min), gamma_max)

    return GammaMap(grid=grid, gamma_min=gamma_min, gamma_max=gamma_max, gamma_0=gamma_0)


def gamma_correct(values, gamma):
    '''
        v -> v^(1/gamma) on [0, 1] values; gamma > 1 brightens
    '''

    gamma = np.asarray(gamma, dtype=np.float64)
    if np.any(gamma <= 0):
        raise InvalidInputError('Gamma must be positive, got %s' % gamma)

    return np.clip(np.power(values, 1.0 / gamma), 0.0, 1.0)


def apply_lao(img, p, gamma, channels='rgb'):
    '''
        Replace every value inside region P by v^(1/gamma)

        channels='rgb' corrects the three channels identically, channels='y'
        corrects only the luma and converts back.
    '''

    if not gamma > 0:
        raise InvalidInputError('Gamma (%s) must be positive' % gamma)

    img = check_image(img)
    p.check(*img.shape[:2])

    out = img.copy()
    if gamma == 1.0:
        return out

    rows, cols = p.slices
    patch = img[rows, cols]

    if channels == 'rgb':
        out[rows, cols] = gamma_correct(patch, gamma)
    elif channels == 'y':
        y, u, v = rgb_to_yuv(patch)
        out[rows, cols] = yuv_to_rgb(gamma_correct(y, gamma), u, v)
    else:
        raise InvalidInputError('Channel mode (%s) must be rgb or y' % channels)

    return out


def apply_gamma_map(img, gamma_grid, channels='rgb'):
    '''
        Per-pixel correction with a full gamma grid
    '''

    img = check_image(img)
    gamma_grid = check_grid(gamma_grid, 'gamma grid')

    if channels == 'rgb':
        return gamma_correct(img, gamma_grid[:, :, None])
    if channels == 'y':
        y, u, v = rgb_to_yuv(img)
        return yuv_to_rgb(gamma_correct(y, gamma_grid), u, v)
    raise InvalidInputError('Channel mode (%s) must be rgb or y' % channels)


def image_gamma(g, params=None):
    '''
        Global operator of the whole luminance map, the chain's equilibrium state
    '''

    g = check_grid(g, 'luminance map')
    stats = region_stats(g, full_region(*g.shape))
    return float(compute_gamma(stats.g_p, stats.var_g, params))
