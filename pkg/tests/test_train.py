import math

import numpy as np
import pytest

from lasq.characterise.synthetic import synthetic_pairs
from lasq.cli.config import RunConfig
from lasq.denoiser.codec import EncoderConfig, encode
from lasq.denoiser.network import init_params, zero_params
from lasq.denoiser.train import (
    Adam,
    ToyTrainer,
    TrainConfig,
    ddim_timesteps,
    infer,
    infer_latent,
    make_sample,
    train_step,
)
from lasq.diffusion.schedule import build_schedule
from lasq.errors import InvalidInputError, NumericError
from lasq.numerics.rng import Rng
from lasq.pipeline import LasqPipeline


ENCODER = EncoderConfig(k=1)


def toy_batch(count=16, size=16):

    pipeline = LasqPipeline(RunConfig({'sampler.levels': 4}))

    batch = []
    for index, (dark, _) in enumerate(synthetic_pairs(count, size)):
        result = pipeline.build_hierarchy(dark, Rng(index))
        batch.append(make_sample(result.stack, dark, ENCODER))
    return batch


@pytest.fixture(scope='module')
def batch():
    return toy_batch()


class TestTrainConfig:

    @pytest.mark.parametrize('kwargs', [{'lr': -1.0}, {'lambda_d': -0.1}, {'lambda_g': -0.1}])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidInputError):
            TrainConfig(**kwargs)


class TestMakeSample:

    def test_latents(self, batch):
        sample = batch[0]
        assert sample.x0.shape == (8, 8, 3)
        assert len(sample.guides) == 4
        np.testing.assert_array_equal(sample.x0, sample.guides[0])
        assert sample.f_l.mean() < sample.x0.mean()


class TestAdam:

    def test_zero_learning_rate(self):
        params = init_params(3, Rng(1))
        grads = params.map(lambda p: np.ones_like(p))
        updated = Adam(lr=0.0).update(params, grads)
        for a, b in zip(params.tensors(), updated.tensors()):
            np.testing.assert_array_equal(a, b)

    def test_first_step_follows_gradient_sign(self):
        params = zero_params()
        grads = params.map(lambda p: np.full(p.shape, -0.3))
        updated = Adam(lr=0.01).update(params, grads)
        np.testing.assert_allclose(updated.w1, 0.01 * 0.3 / (0.3 + 1e-8))

    def test_negative_learning_rate(self):
        with pytest.raises(InvalidInputError):
            Adam(lr=-1.0)


class TestTrainStep:

    def test_report_and_determinism(self, batch):
        sched = build_schedule(4, 0.5, 0.8)
        cfg = TrainConfig(lr=1e-3, encoder=ENCODER)
        params = init_params(3, Rng(2))

        first, report = train_step(batch[:2], params, sched, Adam(1e-3), Rng(3), cfg)
        second, _ = train_step(batch[:2], params, sched, Adam(1e-3), Rng(3), cfg)

        assert set(report) == {'loss', 'loss_d', 'loss_g'}
        assert report['loss'] == pytest.approx(0.9 * report['loss_d'] + 0.005 * report['loss_g'])
        for a, b in zip(first.tensors(), second.tensors()):
            np.testing.assert_array_equal(a, b)

    def test_non_finite_parameters(self, batch):
        params = init_params(3, Rng(2)).map(lambda p: p * np.inf)
        with pytest.raises(NumericError):
            train_step(batch[:1], params, build_schedule(4, 0.5, 0.8), Adam(1e-3), Rng(0), TrainConfig(encoder=ENCODER))

    def test_empty_batch(self):
        with pytest.raises(InvalidInputError):
            train_step([], zero_params(), build_schedule(4), Adam(), Rng(0), TrainConfig())


class TestToyTrainer:

    def test_loss_halves(self, batch):
        sched = build_schedule(16)
        trainer = ToyTrainer(sched, TrainConfig(lr=1e-3, encoder=ENCODER), seed=0)

        initial = trainer.evaluate(batch, seed=99)
        history = trainer.train(batch, 200)
        final = trainer.evaluate(batch, seed=99)

        assert len(history) == 200
        assert final < 0.5 * initial

    def test_evaluate_is_seeded(self, batch):
        trainer = ToyTrainer(build_schedule(4, 0.5, 0.8), TrainConfig(encoder=ENCODER), seed=1)
        assert trainer.evaluate(batch[:2], seed=4) == trainer.evaluate(batch[:2], seed=4)

    def test_same_seed_same_parameters(self, batch):
        sched = build_schedule(4, 0.5, 0.8)
        first = ToyTrainer(sched, TrainConfig(lr=1e-3, encoder=ENCODER), seed=7)
        second = ToyTrainer(sched, TrainConfig(lr=1e-3, encoder=ENCODER), seed=7)
        first.train(batch[:2], 3)
        second.train(batch[:2], 3)

        for a, b in zip(first.params.tensors(), second.params.tensors()):
            np.testing.assert_array_equal(a, b)


class TestInference:

    def test_timesteps(self):
        assert ddim_timesteps(1000, 10) == [1000, 900, 800, 700, 600, 500, 400, 300, 200, 100, 0]
        assert ddim_timesteps(3, 10) == [3, 2, 1, 0]
        with pytest.raises(InvalidInputError):
            ddim_timesteps(10, 0)

    def test_perfect_predictor_recovers_target(self, np_rng):
        sched = build_schedule(10)
        target = np_rng.uniform(0.2, 0.8, size=(4, 4, 3))

        def predictor(x_t, t):
            abar = sched.alpha_bar(t)
            return (x_t - math.sqrt(abar) * target) / math.sqrt(1 - abar)

        out = infer(target, None, sched, 1, Rng(0), EncoderConfig(k=0), predictor)
        np.testing.assert_allclose(out, target, atol=1e-10)

    def test_seeded(self, np_rng):
        f_l = encode(np_rng.uniform(size=(8, 8, 3)), ENCODER)
        params = init_params(3, Rng(1))
        sched = build_schedule(20)

        first = infer_latent(f_l, params, sched, 5, Rng(6))
        second = infer_latent(f_l, params, sched, 5, Rng(6))
        np.testing.assert_array_equal(first, second)

        image = infer(f_l, params, sched, 5, Rng(6), ENCODER)
        assert image.shape == (8, 8, 3)
        assert image.min() >= 0.0 and image.max() <= 1.0
