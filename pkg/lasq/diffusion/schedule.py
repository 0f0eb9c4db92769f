from dataclasses import dataclass, field

import numpy as np

from lasq.errors import InvalidInputError


@dataclass(frozen=True)
class DiffusionSchedule:
    '''
        Per-step noise and guidance coefficients for t = 1..T

        Arrays are stored 0-based: beta[t - 1] is beta_t. alpha_bar(0) is 1.
    '''

    t_steps: int
    beta: np.ndarray = field(repr=False)
    alpha_bar_steps: np.ndarray = field(repr=False)
    tau: np.ndarray = field(repr=False)

    def __post_init__(self):

        if self.t_steps < 1:
            raise InvalidInputError('Number of diffusion steps (%s) must be at least 1' % self.t_steps)
        for name in ('beta', 'alpha_bar_steps', 'tau'):
            if len(getattr(self, name)) != self.t_steps:
                raise InvalidInputError('Schedule array %s has %d entries for T = %d' % (name, len(getattr(self, name)), self.t_steps))

        if np.any(self.beta < 0) or np.any(self.beta >= 1):
            raise InvalidInputError('Every beta must lie in [0, 1)')
        if np.any(self.tau < 0):
            raise InvalidInputError('Guidance weights tau must be non-negative')
        if np.any(self.tau > np.sqrt(1.0 - self.beta)):
            raise InvalidInputError('Guidance weights must satisfy tau_t <= sqrt(1 - beta_t)')


    def check_step(self, t, allow_zero=False):

        low = 0 if allow_zero else 1
        if not low <= t <= self.t_steps:
            raise InvalidInputError('Step t (%s) outside [%d, %d]' % (t, low, self.t_steps))


    def beta_at(self, t):
        self.check_step(t)
        return float(self.beta[t - 1])


    def tau_at(self, t):
        self.check_step(t)
        return float(self.tau[t - 1])


    def alpha_bar(self, t):
        '''
            Cumulative product of (1 - beta_s) for s <= t, with alpha_bar(0) = 1
        '''

        self.check_step(t, allow_zero=True)
        return 1.0 if t == 0 else float(self.alpha_bar_steps[t - 1])


    def with_tau(self, tau):
        return DiffusionSchedule(self.t_steps, self.beta, self.alpha_bar_steps, np.asarray(tau, dtype=np.float64))


def linear_betas(t_steps, beta_start=1e-4, beta_end=0.02):
    '''
        beta_t spaced linearly from beta_start (t = 1) to beta_end (t = T)
    '''

    if not 0 < beta_start < 1 or not 0 < beta_end < 1:
        raise InvalidInputError('Beta range (%s, %s) must lie in (0, 1)' % (beta_start, beta_end))

    if t_steps == 1:
        return np.array([beta_start], dtype=np.float64)
    return np.linspace(beta_start, beta_end, t_steps)


def tau_schedule(t_steps, kind='linear', tau_max=0.05):
    '''
        Guidance weights per step

            linear:   tau_t = tau_max (1 - t / T)
            constant: tau_t = tau_max
    '''

    if tau_max < 0:
        raise InvalidInputError('tau_max (%s) must be non-negative' % tau_max)

    t = np.arange(1, t_steps + 1, dtype=np.float64)
    if kind == 'linear':
        return tau_max * (1.0 - t / t_steps)
    if kind == 'constant':
        return np.full(t_steps, float(tau_max))
    raise InvalidInputError('Tau schedule (%s) not in valid list [linear, constant]' % kind)


def build_schedule(t_steps, beta_start=1e-4, beta_end=0.02, tau_kind='linear', tau_max=0.05, beta=None):
    '''
        Linear-beta schedule with cumulative products, or an explicit beta array
    '''

    t_steps = int(t_steps)
    if t_steps < 1:
        raise InvalidInputError('Number of diffusion steps (%s) must be at least 1' % t_steps)

    if beta is None:
        beta = linear_betas(t_steps, beta_start, beta_end)
    beta = np.asarray(beta, dtype=np.float64)

    alpha_bar = np.cumprod(1.0 - beta)
    if np.any(np.diff(alpha_bar) >= 0) or np.any(beta <= 0):
        raise InvalidInputError('Schedule must give strictly decreasing alpha_bar; every beta must be positive')

    return DiffusionSchedule(t_steps=t_steps, beta=beta, alpha_bar_steps=alpha_bar, tau=tau_schedule(t_steps, tau_kind, tau_max))


def psi(t, t_total, n_levels, ceil=False):
    '''
        Temporal mapping of step t onto a hierarchy level

            psi(t) = max(1, floor(t N / T)), clamped into [1, N]

        ceil=True uses ceil(t N / T) instead.
    '''

    if n_levels > t_total:
        raise InvalidInputError('Hierarchy levels (%d) exceed diffusion steps (%d)' % (n_levels, t_total))
    if not 1 <= t <= t_total:
        raise InvalidInputError('Step t (%s) outside [1, %d]' % (t, t_total))

    # integer arithmetic keeps the endpoints exact
    if ceil:
        level = -(-t * n_levels // t_total)
    else:
        level = t * n_levels // t_total

    return min(max(level, 1), n_levels)
