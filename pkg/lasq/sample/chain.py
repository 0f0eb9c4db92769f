import logging
import math
from dataclasses import dataclass, field

import numpy as np

from lasq.errors import InvalidInputError
from lasq.sample.truncnorm import TruncGaussian, truncnorm_sample


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChainConfig:
    step_lambda: float = 0.2
    levels: int = 4

    def __post_init__(self):
        if not self.step_lambda > 0:
            raise InvalidInputError('MCMC step size (%s) must be positive' % self.step_lambda)
        if int(self.levels) < 1:
            raise InvalidInputError('Number of hierarchy levels (%s) must be at least 1' % self.levels)


@dataclass(frozen=True)
class LaoSet:
    '''
        Operators of hierarchy level n: 2^(n-1) chain states
    '''

    level: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.level < 1:
            raise InvalidInputError('LAO set level (%s) must be at least 1' % self.level)
        if len(self.values) != 2**(self.level - 1):
            raise InvalidInputError('Level %d needs %d operators, got %d' % (self.level, 2**(self.level - 1), len(self.values)))

    def __len__(self):
        return len(self.values)


def build_distribution(gm, sigma_override=None):
    '''
        Truncated normal target N_trunc(gamma_0, sigma^2; gamma_min, gamma_max)

        sigma defaults to the standard deviation of the per-pixel operator map.
        A map of identical operators gives a degenerate distribution.
    '''

    if gm.is_constant:
        return TruncGaussian(mu=gm.gamma_0, sigma=0.0, lo=gm.gamma_0, hi=gm.gamma_0, degenerate=True)

    sigma = gm.std if sigma_override is None else float(sigma_override)
    if not sigma > 0:
        raise InvalidInputError('Target sigma (%s) must be positive' % sigma)

    return TruncGaussian(mu=gm.gamma_0, sigma=sigma, lo=gm.gamma_min, hi=gm.gamma_max)


def clamp_init(init, target):
    '''
        Move a chain start into the support of the target
    '''

    return min(max(float(init), target.lo), target.hi)


def hastings_ratio(current, proposal, target, step_lambda):
    '''
        [p(x') q(x | x')] / [p(x) q(x' | x)] for the truncated Gaussian kernel

        The kernel's Gaussian factor is symmetric, so only the truncation
        normalisers of the forward and backward kernels survive.
    '''

    forward = TruncGaussian(mu=current, sigma=step_lambda, lo=target.lo, hi=target.hi)
    backward = TruncGaussian(mu=proposal, sigma=step_lambda, lo=target.lo, hi=target.hi)

    log_target = -0.5 * ((proposal - target.mu)**2 - (current - target.mu)**2) / target.sigma**2

    return math.exp(log_target) * forward.normalizer / backward.normalizer


def _transition(current, target, step_lambda, rng):

    # propose from the truncated kernel centred on the current state
    forward = TruncGaussian(mu=current, sigma=step_lambda, lo=target.lo, hi=target.hi)
    proposal = truncnorm_sample(forward, rng)

    ratio = hastings_ratio(current, proposal, target, step_lambda)

    if rng.uniform() < ratio:
        return proposal, True
    return current, False


def mh_step(current, target, step_lambda, rng):
    '''
        One Metropolis-Hastings transition under the truncated Gaussian kernel
    '''

    if target.degenerate:
        return current

    if not target.lo <= current <= target.hi:
        raise InvalidInputError('Chain state (%s) outside [%s, %s]' % (current, target.lo, target.hi))

    return _transition(current, target, step_lambda, rng)[0]


def sample_chain(target, step_lambda, init, n_steps, rng):
    '''
        Run n_steps transitions from init

        Returns the visited states (excluding init) and the number of
        accepted proposals.
    '''

    if target.degenerate:
        return np.full(n_steps, target.mu), 0

    if not target.lo <= init <= target.hi:
        raise InvalidInputError('Chain start (%s) outside [%s, %s]' % (init, target.lo, target.hi))

    states = np.empty(n_steps)
    accepted = 0

    current = float(init)
    for i in range(n_steps):
        current, ok = _transition(current, target, step_lambda, rng)
        states[i] = current
        accepted += ok

    return states, accepted


def sample_lao_hierarchy(dist, cfg, init, rng):
    '''
        One LAO set per hierarchy level, levels 1..N

        Every level runs a fresh chain from init on its own derived stream and
        collects its first 2^(n-1) states.
    '''

    if not dist.lo <= init <= dist.hi:
        raise InvalidInputError('Chain start (%s) outside [%s, %s]' % (init, dist.lo, dist.hi))

    streams = rng.fork(cfg.levels)

    hierarchy = []
    for level in range(1, cfg.levels + 1):

        count = 2**(level - 1)
        states, accepted = sample_chain(dist, cfg.step_lambda, init, count, streams[level - 1])
        hierarchy.append(LaoSet(level=level, values=states))

        if not dist.degenerate:
            logger.info('Level %d: %d operators, acceptance rate %0.3f', level, count, accepted / count)

    return hierarchy


def fixed_lao_hierarchy(dist, levels):
    '''
        Static global correction: every operator at every level equals gamma_0
    '''

    return [LaoSet(level=n, values=np.full(2**(n - 1), dist.mu)) for n in range(1, levels + 1)]
