import math

import numpy as np

from lasq.diffusion.schedule import psi
from lasq.errors import InvalidInputError, ShapeError


def _check_same(a, b, names):

    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError('%s %s and %s %s differ in shape' % (names[0], a.shape, names[1], b.shape))
    return a, b


def _guide_for(guides, t, sched, ceil=False):
    '''
        Guide of level psi(t); guides[0] is level 1
    '''

    level = psi(t, sched.t_steps, len(guides), ceil)
    if level > len(guides) or guides[level - 1] is None:
        raise InvalidInputError('No guide for level %d (step %d)' % (level, t))
    return np.asarray(guides[level - 1], dtype=np.float64)


def forward_step(x_prev, f_guide, t, sched, rng):
    '''
        One guided noising step

            x_t = (sqrt(1 - beta_t) - tau_t) x_{t-1} + tau_t F + sqrt(beta_t) eps
    '''

    x_prev, f_guide = _check_same(x_prev, f_guide, ('state', 'guide'))

    beta = sched.beta_at(t)
    tau = sched.tau_at(t)
    eps = rng.normal(x_prev.shape)

    return (math.sqrt(1.0 - beta) - tau) * x_prev + tau * f_guide + math.sqrt(beta) * eps


def forward_marginal_closed(x0, guides, t, sched, ceil=False):
    '''
        Closed-form guided marginal with weights

            w_{t,s} = sqrt(abar_t) tau_s sqrt(1 - abar_{s-1}) / sqrt(abar_s)

        mean = sqrt(abar_t) x0 + sum_s w_{t,s} (F^(psi(s)) - x0),  var = 1 - abar_t
    '''

    x0 = np.asarray(x0, dtype=np.float64)
    sched.check_step(t)

    root_t = math.sqrt(sched.alpha_bar(t))
    mean = root_t * x0

    for s in range(1, t + 1):
        weight = root_t * sched.tau_at(s) * math.sqrt(1.0 - sched.alpha_bar(s - 1)) / math.sqrt(sched.alpha_bar(s))
        if weight == 0.0:
            continue
        guide, _ = _check_same(_guide_for(guides, s, sched, ceil), x0, ('guide', 'x0'))
        mean = mean + weight * (guide - x0)

    return mean, 1.0 - sched.alpha_bar(t)


def forward_marginal_exact(x0, guides, t, sched, ceil=False):
    '''
        Exact moments of the guided recursion

            m_t = c_t m_{t-1} + tau_t F^(psi(t)),  m_0 = x0
            v_t = c_t^2 v_{t-1} + beta_t,          v_0 = 0
            c_t = sqrt(1 - beta_t) - tau_t
    '''

    mean = np.asarray(x0, dtype=np.float64)
    sched.check_step(t)

    var = 0.0
    for s in range(1, t + 1):
        beta = sched.beta_at(s)
        tau = sched.tau_at(s)
        c = math.sqrt(1.0 - beta) - tau

        mean = c * mean
        if tau != 0.0:
            guide, _ = _check_same(_guide_for(guides, s, sched, ceil), mean, ('guide', 'x0'))
            mean = mean + tau * guide
        var = c * c * var + beta

    return mean, var


def reverse_step(x_t, eps_hat, t, sched, sigma_mode='ancestral', rng=None):
    '''
        x_{t-1} = (x_t - beta_t eps_hat) / sqrt(1 - beta_t) + sigma_t b

        sigma_t = sqrt(beta_t) in ancestral mode and 0 in deterministic mode.
    '''

    x_t, eps_hat = _check_same(x_t, eps_hat, ('state', 'noise prediction'))
    beta = sched.beta_at(t)

    out = (x_t - beta * eps_hat) / math.sqrt(1.0 - beta)

    if sigma_mode == 'ancestral':
        if rng is None:
            raise InvalidInputError('Ancestral sampling needs a random generator')
        out = out + math.sqrt(beta) * rng.normal(x_t.shape)
    elif sigma_mode != 'deterministic':
        raise InvalidInputError('Sigma mode (%s) not in valid list [ancestral, deterministic]' % sigma_mode)

    return out


def x0_estimate(x_t, eps_hat, t, sched):
    '''
        (x_t - sqrt(1 - abar_t) eps_hat) / sqrt(abar_t)
    '''

    abar = sched.alpha_bar(t)
    return (np.asarray(x_t, dtype=np.float64) - math.sqrt(1.0 - abar) * np.asarray(eps_hat)) / math.sqrt(abar)


def ddim_step(x_t, eps_hat, t, t_prev, sched, clip=None):
    '''
        Deterministic implicit update from step t to t_prev < t

            x_prev = sqrt(abar_prev) x0_hat + sqrt(1 - abar_prev) eps_hat

        clip=(lo, hi) bounds x0_hat first.
    '''

    if not 0 <= t_prev < t:
        raise InvalidInputError('DDIM needs 0 <= t_prev < t, got t_prev = %s, t = %s' % (t_prev, t))

    x_t, eps_hat = _check_same(x_t, eps_hat, ('state', 'noise prediction'))

    x0_hat = x0_estimate(x_t, eps_hat, t, sched)
    if clip is not None:
        x0_hat = np.clip(x0_hat, clip[0], clip[1])

    abar_prev = sched.alpha_bar(t_prev)
    return math.sqrt(abar_prev) * x0_hat + math.sqrt(1.0 - abar_prev) * eps_hat


def loss_d(eps_true, eps_hat):
    '''
        Mean squared error between true and predicted noise
    '''

    eps_true, eps_hat = _check_same(eps_true, eps_hat, ('noise', 'noise prediction'))
    return float(np.mean((eps_true - eps_hat)**2))


def loss_g(decoded_a, decoded_b):
    '''
        Mean absolute error between decoded images
    '''

    decoded_a, decoded_b = _check_same(decoded_a, decoded_b, ('image', 'image'))
    return float(np.mean(np.abs(decoded_a - decoded_b)))
