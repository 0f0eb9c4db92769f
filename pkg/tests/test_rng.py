import numpy as np
import pytest

from lasq.errors import InvalidInputError
from lasq.numerics.rng import Rng


class TestRng:

    def test_same_seed_same_sequence(self):
        a, b = Rng(42), Rng(42)
        np.testing.assert_array_equal(a.uniform(1000), b.uniform(1000))
        np.testing.assert_array_equal(a.normal((4, 5)), b.normal((4, 5)))
        assert a.normal() == b.normal()

    def test_different_seeds_differ(self):
        assert not np.array_equal(Rng(1).uniform(10), Rng(2).uniform(10))

    def test_uniform_range(self):
        u = Rng(3).uniform(10000)
        assert u.min() >= 0.0
        assert u.max() < 1.0

    def test_uniform_mean(self):
        assert Rng(6).uniform(10**6).mean() == pytest.approx(0.5, abs=0.002)

    def test_normal_moments(self):
        z = Rng(4).normal(10**6)
        assert z.mean() == pytest.approx(0.0, abs=0.005)
        assert z.var() == pytest.approx(1.0, abs=0.01)

    def test_integers_inclusive(self):
        rng = Rng(5)
        draws = {rng.integers(1, 3) for _ in range(200)}
        assert draws == {1, 2, 3}

    @pytest.mark.parametrize('seed', [-1, 2**64])
    def test_invalid_seed(self, seed):
        with pytest.raises(InvalidInputError):
            Rng(seed)


class TestFork:

    def test_fork_is_deterministic(self):
        first = [_.seed for _ in Rng(9).fork(3)]
        second = [_.seed for _ in Rng(9).fork(3)]
        assert first == second

    def test_children_are_distinct(self):
        children = Rng(9).fork(4)
        assert len({_.seed for _ in children}) == 4
        assert not np.array_equal(children[0].uniform(5), children[1].uniform(5))

    def test_fork_does_not_advance_parent(self):
        parent = Rng(11)
        parent.fork(2)
        np.testing.assert_array_equal(parent.uniform(3), Rng(11).uniform(3))
