import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from lasq.denoiser.codec import encode
from lasq.denoiser.train import ToyTrainer, infer, make_sample
from lasq.enhance.hierarchy import HierarchyStack, build_stack, build_two_layer_stack, grid_shape
from lasq.enhance.lao import GammaMap, image_gamma, pixel_gamma_map
from lasq.enhance.luminance import guided_filter_luminance
from lasq.imageio.image import check_image, luminance
from lasq.measure.metrics import psnr
from lasq.numerics.rng import Rng
from lasq.sample.chain import (
    ChainConfig,
    LaoSet,
    build_distribution,
    clamp_init,
    fixed_lao_hierarchy,
    sample_lao_hierarchy,
)
from lasq.sample.truncnorm import TruncGaussian


logger = logging.getLogger(__name__)


@dataclass
class HierarchyResult:
    '''
        Everything the hierarchy stage produced for one image
    '''

    stack: HierarchyStack = field(repr=False)
    hierarchy: List[LaoSet] = field(repr=False)
    gamma_map: GammaMap = field(repr=False)
    distribution: TruncGaussian
    init: float

    def manifest_rows(self):
        '''
            (level, grid shape, gamma values) per stack level
        '''

        rows = []
        for gamma_set in self.hierarchy:
            m, w = grid_shape(gamma_set.level)
            rows.append((gamma_set.level, '%dx%d' % (m, w), [float(_) for _ in gamma_set.values]))

        # two-layer stacks end with the per-pixel layer, one operator per pixel
        if len(self.stack) > len(self.hierarchy):
            gm = self.gamma_map
            grid = np.clip(gm.grid, gm.gamma_min, gm.gamma_max)
            rows.append((len(rows) + 1, '%dx%d' % grid.shape, [float(_) for _ in grid.ravel()]))

        return rows


class LasqPipeline():
    '''
        Reference-free enhancement of a low-light image

        luminance -> per-pixel operator map -> truncated target -> MCMC
        operator hierarchy -> enhanced stack, optionally followed by the
        guided latent denoiser when trained parameters are supplied.
    '''

    def __init__(self, config, verbose=False):

        self.config = config
        self.verbose = verbose or config['verbose']

        self.gf_params = config.guided_filter_params()
        self.lao_params = config.lao_params()
        self.chain_config = config.chain_config()
        self.channels = config['lao.channels']
        self.variant = config['sampler.variant']


    def luminance_map(self, img):
        return guided_filter_luminance(luminance(img), self.gf_params)


    def build_hierarchy(self, img, rng):
        '''
            Sample the operator hierarchy and synthesise the enhanced stack
        '''

        img = check_image(img)

        g = self.luminance_map(img)
        gamma_map = pixel_gamma_map(g, self.lao_params)
        dist = build_distribution(gamma_map, self.config['sampler.sigma'])

        # start from the global operator of the whole image
        init = clamp_init(image_gamma(g, self.lao_params), dist)

        if self.verbose:
            logger.info('Operator range [%0.4f, %0.4f], mean %0.4f, chain start %0.4f',
                        dist.lo, dist.hi, dist.mu, init)

        if self.variant == 'fixed':
            hierarchy = fixed_lao_hierarchy(dist, self.chain_config.levels)
            stack = build_stack(img, hierarchy, self.channels)

        elif self.variant == 'two_layer':
            cfg = ChainConfig(step_lambda=self.chain_config.step_lambda, levels=1)
            hierarchy = sample_lao_hierarchy(dist, cfg, init, rng)
            stack = build_two_layer_stack(img, hierarchy[0], gamma_map, self.channels)

        else:
            hierarchy = sample_lao_hierarchy(dist, self.chain_config, init, rng)
            stack = build_stack(img, hierarchy, self.channels)

        return HierarchyResult(stack=stack, hierarchy=hierarchy, gamma_map=gamma_map, distribution=dist, init=init)


    def enhance(self, img, params=None, seed=None):
        '''
            Enhance img; returns the output image and the hierarchy result

            Without denoiser parameters the output is the first (global) level.
        '''

        seed = self.config['seed'] if seed is None else seed
        chain_rng, infer_rng = Rng(seed).fork(2)

        result = self.build_hierarchy(img, chain_rng)

        if params is None:
            return result.stack[0], result

        encoder = self.config.encoder_config()
        f_l = encode(result.stack.source, encoder)
        out = infer(f_l, params, self.config.schedule(), self.config['infer.steps'], infer_rng, encoder)

        return out, result


    def provenance(self, result, seed=None, extra=None):
        '''
            JSON-serialisable record of a run
        '''

        record = {  'seed'      :   self.config['seed'] if seed is None else seed,
                    'params'    :   dict(self.config.values),
                    'init'      :   result.init,
                    'gamma'     :   [[float(_) for _ in s.values] for s in result.hierarchy],
                    'target'    :   {'mu': result.distribution.mu, 'sigma': result.distribution.sigma,
                                     'lo': result.distribution.lo, 'hi': result.distribution.hi}}

        if extra:
            record.update(extra)
        return record


def mean_luminance(img):
    return float(np.mean(luminance(check_image(img))))


def enhancement_gain(pipeline, dark, truth, seed=None):
    '''
        PSNR gain in dB of the enhanced output over the dark input
    '''

    out, _ = pipeline.enhance(dark, seed=seed)
    return psnr(out, truth) - psnr(dark, truth)


def training_batch(pipeline, images, streams, encoder):
    '''
        Latent training samples, one hierarchy chain stream per low-light image
    '''

    batch = []
    for dark, stream in zip(images, streams):
        result = pipeline.build_hierarchy(dark, stream)
        batch.append(make_sample(result.stack, dark, encoder))
    return batch


def toy_luminance_errors(config, pairs, seed=None):
    '''
        Train the toy denoiser on pairs, then sample each dark image and
        measure |mean luminance(output) - mean luminance(truth)|

        Returns the trainer and the per-pair errors.
    '''

    seed = config['seed'] if seed is None else seed
    pipeline = LasqPipeline(config)
    encoder = config.encoder_config()
    sched = config.schedule()

    streams = Rng(seed).fork(2 * len(pairs) + 1)
    darks = [dark for dark, _ in pairs]
    batch = training_batch(pipeline, darks, streams[1:len(pairs) + 1], encoder)

    trainer = ToyTrainer(sched, config.train_config(), seed=streams[0].seed, verbose=pipeline.verbose)
    trainer.train(batch, config['train.steps'])

    errors = []
    for (dark, truth), stream in zip(pairs, streams[len(pairs) + 1:]):
        out = infer(encode(dark, encoder), trainer.params, sched, config['infer.steps'], stream, encoder)
        errors.append(abs(mean_luminance(out) - mean_luminance(truth)))

    if pipeline.verbose:
        logger.info('Toy inference luminance error: mean %0.4f, max %0.4f', np.mean(errors), np.max(errors))

    return trainer, errors
