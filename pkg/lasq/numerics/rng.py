import numpy as np

from lasq.errors import InvalidInputError


class Rng():
    '''
        Seedable generator built on the counter-based Philox bit generator

        Uniforms are the 53-bit doubles numpy derives from the Philox stream,
        so a given seed reproduces the same sequence on every platform.
        Normals use the Box-Muller transform of two uniforms, keeping only the
        cosine branch:

            z = sqrt(-2 ln(1 - u1)) * cos(2 pi u2)

        One instance belongs to a single task. Use fork() to hand independent
        streams to concurrent work.
    '''

    def __init__(self, seed=0):

        seed = int(seed)
        if seed < 0 or seed >= 2**64:
            raise InvalidInputError('The seed (%d) must fit in an unsigned 64-bit integer' % seed)

        self.seed = seed
        self._generator = np.random.Generator(np.random.Philox(seed))


    def uniform(self, size=None):
        '''
            Uniform draws in [0, 1)
        '''

        if size is None:
            return float(self._generator.random())
        return self._generator.random(size)


    def normal(self, size=None):
        '''
            Standard normal draws via Box-Muller
        '''

        if size is None:
            u1, u2 = self._generator.random(2)
            return float(np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2))

        shape = (size,) if np.isscalar(size) else tuple(size)
        count = int(np.prod(shape))

        uniforms = self._generator.random(2 * count).reshape(count, 2)
        z = np.sqrt(-2.0 * np.log1p(-uniforms[:, 0])) * np.cos(2.0 * np.pi * uniforms[:, 1])

        return z.reshape(shape)


    def integers(self, low, high):
        '''
            Uniform integer in [low, high]
        '''

        return int(self._generator.integers(low, high + 1))


    def child_seed(self, index):
        '''
            Derive the seed of the index-th child stream
        '''

        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(int(index),))
        return int(sequence.generate_state(1, dtype=np.uint64)[0])


    def fork(self, count):
        '''
            Independent child generators with derived seeds
        '''

        return [Rng(self.child_seed(i)) for i in range(count)]
