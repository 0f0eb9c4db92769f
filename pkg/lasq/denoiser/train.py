import logging
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from lasq.denoiser.codec import EncoderConfig, decode, decode_backward, encode
from lasq.denoiser.network import denoiser_backward, denoiser_forward, init_params
from lasq.diffusion.process import ddim_step, forward_marginal_exact, loss_d, loss_g, x0_estimate
from lasq.errors import InvalidInputError, NumericError
from lasq.numerics.kernels import pairwise_sum
from lasq.numerics.rng import Rng


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 2e-5
    lambda_d: float = 0.9
    lambda_g: float = 0.005
    psi_ceil: bool = False
    encoder: EncoderConfig = field(default_factory=EncoderConfig)

    def __post_init__(self):
        if self.lr < 0:
            raise InvalidInputError('Learning rate (%s) must be non-negative' % self.lr)
        if self.lambda_d < 0 or self.lambda_g < 0:
            raise InvalidInputError('Loss weights must be non-negative, got %s, %s' % (self.lambda_d, self.lambda_g))


@dataclass
class TrainingSample:
    '''
        Latent training triple: clean target x0, guide latents by level, condition F_L
    '''

    x0: np.ndarray
    guides: List[np.ndarray]
    f_l: np.ndarray


def make_sample(stack, low, encoder):
    '''
        Encode a hierarchy stack and its low-light source

        x0 is the coarsest guide, the stack levels guide the forward process
        and the low-light latent conditions the network.
    '''

    guides = [encode(level, encoder) for level in stack.levels]
    return TrainingSample(x0=guides[0].copy(), guides=guides, f_l=encode(low, encoder))


class Adam():
    '''
        Adam optimiser over DenoiserParams
    '''

    def __init__(self, lr=2e-5, beta1=0.9, beta2=0.999, eps=1e-8):

        if lr < 0:
            raise InvalidInputError('Learning rate (%s) must be non-negative' % lr)

        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps

        self.count = 0
        self.m = None
        self.v = None


    def update(self, params, grads):
        '''
            Return the parameters after one bias-corrected Adam step
        '''

        if self.m is None:
            self.m = grads.map(np.zeros_like)
            self.v = grads.map(np.zeros_like)

        self.count += 1
        self.m = self.m.map(lambda m, g: self.beta1 * m + (1.0 - self.beta1) * g, grads)
        self.v = self.v.map(lambda v, g: self.beta2 * v + (1.0 - self.beta2) * g * g, grads)

        m_scale = 1.0 / (1.0 - self.beta1**self.count)
        v_scale = 1.0 / (1.0 - self.beta2**self.count)

        return params.map(lambda p, m, v: p - self.lr * (m * m_scale) / (np.sqrt(v * v_scale) + self.eps), self.m, self.v)


def sample_loss(sample, t, eps, params, sched, cfg):
    '''
        Weighted loss lambda_d L_d + lambda_g L_g of one sample at step t
        with noise eps, and its parameter gradients

        x_t is drawn from the exact guided marginal. L_g compares the decoded
        clean estimate with the decoded coarsest guide.
    '''

    mean, var = forward_marginal_exact(sample.x0, sample.guides, t, sched, cfg.psi_ceil)
    x_t = mean + math.sqrt(var) * eps

    eps_hat, cache = denoiser_forward(x_t, t / sched.t_steps, sample.f_l, params, return_cache=True)

    # noise prediction term
    l_d = loss_d(eps, eps_hat)
    grad_eps_hat = cfg.lambda_d * 2.0 * (eps_hat - eps) / eps.size

    # guidance term through the decoder
    l_g = 0.0
    if cfg.lambda_g > 0:
        x0_hat = x0_estimate(x_t, eps_hat, t, sched)
        decoded = decode(x0_hat, cfg.encoder)
        target = decode(sample.guides[0], cfg.encoder)
        l_g = loss_g(decoded, target)

        grad_decoded = np.sign(decoded - target) / decoded.size
        grad_x0_hat = decode_backward(grad_decoded, x0_hat, cfg.encoder)

        abar = sched.alpha_bar(t)
        grad_eps_hat = grad_eps_hat - cfg.lambda_g * math.sqrt(1.0 - abar) / math.sqrt(abar) * grad_x0_hat

    grads = denoiser_backward(grad_eps_hat, cache, params)

    return cfg.lambda_d * l_d + cfg.lambda_g * l_g, l_d, l_g, grads


def _check_finite(values, what):

    if not all(np.all(np.isfinite(_)) for _ in values):
        raise NumericError('Non-finite %s encountered during training' % what)


def train_step(batch, params, sched, optimizer, rng, cfg):
    '''
        One Adam step on the batch-averaged loss

        Every sample draws its own step t uniformly in [1, T] and its own
        standard normal noise.
    '''

    if not batch:
        raise InvalidInputError('Training batch is empty')

    losses, d_losses, g_losses, all_grads = [], [], [], []
    for sample in batch:
        t = rng.integers(1, sched.t_steps)
        eps = rng.normal(sample.x0.shape)

        loss, l_d, l_g, grads = sample_loss(sample, t, eps, params, sched, cfg)
        losses.append(loss)
        d_losses.append(l_d)
        g_losses.append(l_g)
        all_grads.append(grads)

    _check_finite([losses], 'loss')

    # order-independent batch average
    count = len(batch)
    grads = all_grads[0].map(lambda *tensors: pairwise_sum(np.stack(tensors)) / count, *all_grads[1:])
    _check_finite(grads.tensors(), 'gradient')

    new_params = optimizer.update(params, grads)
    _check_finite(new_params.tensors(), 'parameter')

    report = {  'loss'      :   float(pairwise_sum(losses)) / count,
                'loss_d'    :   float(pairwise_sum(d_losses)) / count,
                'loss_g'    :   float(pairwise_sum(g_losses)) / count}

    return new_params, report


class ToyTrainer():
    '''
        Owns the parameters and optimiser state of a toy denoiser run
    '''

    def __init__(self, sched, cfg=None, params=None, seed=0, verbose=False):

        self.sched = sched
        self.cfg = cfg or TrainConfig()
        self.verbose = verbose

        self.rng = Rng(seed)
        init_rng, self.train_rng = self.rng.fork(2)

        self.params = params if params is not None else init_params(self.cfg.encoder.channels, init_rng)
        self.optimizer = Adam(lr=self.cfg.lr)
        self.history = []


    def train_step(self, batch):

        self.params, report = train_step(batch, self.params, self.sched, self.optimizer, self.train_rng, self.cfg)
        self.history.append(report)
        return report


    def train(self, batch, steps):
        '''
            Run steps optimiser updates and return the loss history
        '''

        for step in range(steps):
            report = self.train_step(batch)

            if self.verbose or step == steps - 1:
                logger.info('Step %d of %d: loss %0.6f (L_d %0.6f, L_g %0.6f)',
                            step + 1, steps, report['loss'], report['loss_d'], report['loss_g'])

        return self.history


    def evaluate(self, batch, seed=0):
        '''
            L_d averaged over every step t = 1..T and every sample with noise
            drawn from a fixed seed
        '''

        rng = Rng(seed)

        values = []
        for t in range(1, self.sched.t_steps + 1):
            for sample in batch:
                eps = rng.normal(sample.x0.shape)
                mean, var = forward_marginal_exact(sample.x0, sample.guides, t, self.sched, self.cfg.psi_ceil)
                eps_hat = denoiser_forward(mean + math.sqrt(var) * eps, t / self.sched.t_steps, sample.f_l, self.params)
                values.append(loss_d(eps, eps_hat))

        return float(pairwise_sum(values)) / len(values)


def ddim_timesteps(t_steps, steps):
    '''
        Strided descending schedule T = t_0 > t_1 > ... > 0
    '''

    if steps < 1:
        raise InvalidInputError('DDIM step count (%s) must be at least 1' % steps)

    points = np.round(np.linspace(t_steps, 0, min(steps, t_steps) + 1)).astype(int)
    return [int(_) for _ in np.unique(points)[::-1]]


def infer_latent(f_l, params, sched, steps, rng, predictor=None):
    '''
        Deterministic implicit sampling from standard normal noise down to
        the clean latent estimate

        predictor(x_t, t) replaces the network when given.
    '''

    f_l = np.asarray(f_l, dtype=np.float64)

    if predictor is None:
        def predictor(x_t, t):
            return denoiser_forward(x_t, t / sched.t_steps, f_l, params)

    x = rng.normal(f_l.shape)
    timesteps = ddim_timesteps(sched.t_steps, steps)

    for t, t_prev in zip(timesteps[:-1], timesteps[1:]):
        x = ddim_step(x, predictor(x, t), t, t_prev, sched)

    _check_finite([x], 'latent')
    return x


def infer(f_l, params, sched, steps, rng, encoder=None, predictor=None):
    '''
        Sample a clean latent conditioned on f_l and decode it to an image
    '''

    encoder = encoder or EncoderConfig()
    return decode(infer_latent(f_l, params, sched, steps, rng, predictor), encoder)
