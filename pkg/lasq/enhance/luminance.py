from dataclasses import dataclass

import numpy as np

from lasq.errors import InvalidInputError
from lasq.numerics.kernels import box_mean, box_moments, check_grid


@dataclass(frozen=True)
class GuidedFilterParams:
    radius: int = 8
    eps_gf: float = 0.01

    def __post_init__(self):
        if int(self.radius) < 1:
            raise InvalidInputError('Guided filter radius (%s) must be at least 1' % self.radius)
        if not self.eps_gf > 0:
            raise InvalidInputError('Guided filter eps (%s) must be positive' % self.eps_gf)


@dataclass(frozen=True)
class Region:
    '''
        Half-open pixel rectangle [row_start, row_end) x [col_start, col_end)
    '''

    row_start: int
    row_end: int
    col_start: int
    col_end: int

    @property
    def shape(self):
        return (self.row_end - self.row_start, self.col_end - self.col_start)

    @property
    def size(self):
        rows, cols = self.shape
        return rows * cols

    @property
    def slices(self):
        return (slice(self.row_start, self.row_end), slice(self.col_start, self.col_end))

    def check(self, rows, cols):
        '''
            Raise unless the region is non-empty and inside a rows x cols image
        '''

        if self.row_end <= self.row_start or self.col_end <= self.col_start:
            raise InvalidInputError('Region %s is empty' % (self,))
        if self.row_start < 0 or self.col_start < 0 or self.row_end > rows or self.col_end > cols:
            raise InvalidInputError('Region %s exceeds the %dx%d image' % (self, rows, cols))


@dataclass(frozen=True)
class RegionStats:
    g_p: float
    var_g: float


def full_region(rows, cols):
    return Region(0, rows, 0, cols)


def guided_filter_coefficients(y, params):
    '''
        Local linear coefficients a, b of the self-guided filter
    '''

    mean, var = box_moments(y, params.radius)

    a = var / (var + params.eps_gf)
    b = mean * (1.0 - a)

    return a, b


def guided_filter_luminance(y, params=None):
    '''
        Smoothed illumination map G from the luminance channel

            a = var / (var + eps),  b = mean * (1 - a)
            G = mean(a) * y + mean(b), clamped to [0, 1]

        Windowed statistics use the same border-clipped window of radius r in
        both passes.
    '''

    params = params or GuidedFilterParams()
    y = check_grid(y, 'luminance channel')

    a, b = guided_filter_coefficients(y, params)

    # smooth the coefficients
    a_bar = box_mean(a, params.radius)
    b_bar = box_mean(b, params.radius)

    return np.clip(a_bar * y + b_bar, 0.0, 1.0)


def region_stats(g, p):
    '''
        Regional luminance scalar (mean) and population variance of G over P
    '''

    g = check_grid(g, 'luminance map')
    p.check(*g.shape)

    values = g[p.slices]
    g_p = float(values.mean())
    var_g = float(np.maximum(values.var(), 0.0))

    return RegionStats(g_p=min(max(g_p, 0.0), 1.0), var_g=var_g)
