from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from lasq.errors import InvalidInputError


SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class TruncGaussian:
    '''
        Normal density N(mu, sigma^2) restricted and renormalised to [lo, hi]

        A degenerate distribution (lo == hi) stands for the constant mu and
        is produced when every per-pixel operator is identical.
    '''

    mu: float
    sigma: float
    lo: float
    hi: float
    degenerate: bool = False

    def __post_init__(self):

        if self.degenerate:
            if not self.lo <= self.mu <= self.hi:
                raise InvalidInputError('Degenerate distribution mean (%s) outside [%s, %s]' % (self.mu, self.lo, self.hi))
            return

        if not self.lo < self.hi:
            raise InvalidInputError('Truncation bounds must satisfy lo < hi, got [%s, %s]' % (self.lo, self.hi))
        if not self.sigma > 0:
            raise InvalidInputError('Sigma (%s) must be positive' % self.sigma)

    @property
    def a(self):
        return (self.lo - self.mu) / self.sigma

    @property
    def b(self):
        return (self.hi - self.mu) / self.sigma

    @property
    def normalizer(self):
        '''
            Probability mass Z of the untruncated normal inside [lo, hi]
        '''

        a, b = self.a, self.b

        # evaluate in the tail nearer the mean to keep precision
        if a > 0:
            return float(ndtr(-a) - ndtr(-b))
        return float(ndtr(b) - ndtr(a))


def _std_pdf(z):
    return np.exp(-0.5 * z * z) / SQRT_2PI


def truncnorm_pdf(d, x):
    '''
        phi((x - mu) / sigma) / (sigma Z) inside [lo, hi], zero outside
    '''

    x = np.asarray(x, dtype=np.float64)

    if d.degenerate:
        pdf = np.where(x == d.mu, np.inf, 0.0)
    else:
        inside = (x >= d.lo) & (x <= d.hi)
        pdf = np.where(inside, _std_pdf((x - d.mu) / d.sigma) / (d.sigma * d.normalizer), 0.0)

    return float(pdf) if pdf.ndim == 0 else pdf


def truncnorm_cdf(d, x):
    '''
        Cumulative distribution, 0 below lo and 1 above hi
    '''

    x = np.asarray(x, dtype=np.float64)

    if d.degenerate:
        cdf = np.where(x >= d.mu, 1.0, 0.0)
    else:
        z = (np.clip(x, d.lo, d.hi) - d.mu) / d.sigma

        if d.a > 0:
            cdf = (ndtr(-d.a) - ndtr(-z)) / d.normalizer
        else:
            cdf = (ndtr(z) - ndtr(d.a)) / d.normalizer

        cdf = np.where(x <= d.lo, 0.0, np.where(x >= d.hi, 1.0, np.clip(cdf, 0.0, 1.0)))

    return float(cdf) if cdf.ndim == 0 else cdf


def truncnorm_ppf(d, u):
    '''
        Inverse cumulative distribution for u in [0, 1]
    '''

    u = np.asarray(u, dtype=np.float64)

    if d.degenerate:
        x = np.full(u.shape, d.mu)
    else:
        a, b = d.a, d.b

        # mirror intervals lying right of the mean so the CDF differences
        # are taken between small numbers
        if a > 0:
            lower, upper = ndtr(-a), ndtr(-b)
            z = -ndtri(lower - u * (lower - upper))
        else:
            lower, upper = ndtr(a), ndtr(b)
            z = ndtri(lower + u * (upper - lower))

        x = np.clip(d.mu + d.sigma * z, d.lo, d.hi)

    return float(x) if x.ndim == 0 else x


def truncnorm_sample(d, rng, size=None):
    '''
        Inverse-CDF draw(s) from the truncated normal
    '''

    if d.degenerate:
        return d.mu if size is None else np.full(size, d.mu)

    return truncnorm_ppf(d, rng.uniform(size))


def truncnorm_moments(d):
    '''
        Closed-form mean and variance of the truncated normal
    '''

    if d.degenerate:
        return d.mu, 0.0

    a, b, z = d.a, d.b, d.normalizer
    pa, pb = _std_pdf(a), _std_pdf(b)

    # a or b may be infinite in the limit; a * pdf(a) -> 0 there
    apa = a * pa if np.isfinite(a) else 0.0
    bpb = b * pb if np.isfinite(b) else 0.0

    shift = (pa - pb) / z
    mean = d.mu + d.sigma * shift
    var = d.sigma**2 * (1.0 + (apa - bpb) / z - shift**2)

    return float(mean), float(var)
