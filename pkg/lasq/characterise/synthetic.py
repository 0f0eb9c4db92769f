import numpy as np

from lasq.errors import InvalidInputError


DARKEN_EXPONENT = 2.5


def synthetic_ground_truth(index, size=16):
    '''
        Smooth, mildly tinted mid-tone test image

        Each index picks its own base level in [0.40, 0.52], ramp directions
        and a low-frequency ripple, so different indices give different
        but equally well-behaved scenes.
    '''

    if size < 2:
        raise InvalidInputError('Synthetic image size (%s) must be at least 2' % size)

    index = int(index)
    rows, cols = np.meshgrid(np.linspace(0.0, 1.0, size), np.linspace(0.0, 1.0, size), indexing='ij')

    base = 0.40 + 0.12 * ((index * 7) % 11) / 10.0
    angle = 0.7 * index
    ramp = 0.05 * ((rows - 0.5) * np.cos(angle) + (cols - 0.5) * np.sin(angle))
    ripple = 0.02 * np.sin(2.0 * np.pi * (rows + 0.5 * cols) + index)

    # per-channel tint
    tint = 0.02 * np.cos(angle + np.array([0.0, 2.0, 4.0]))

    img = (base + ramp + ripple)[:, :, None] + tint[None, None, :]
    return np.clip(img, 0.0, 1.0)


def darken(img, exponent=DARKEN_EXPONENT):
    return np.power(img, exponent)


def synthetic_pairs(count, size=16, exponent=DARKEN_EXPONENT):
    '''
        (dark, truth) pairs with dark = truth^exponent
    '''

    pairs = []
    for index in range(count):
        truth = synthetic_ground_truth(index, size)
        pairs.append((darken(truth, exponent), truth))
    return pairs


def power_law_pair(kappa, size=16):
    '''
        Gray ramp pair with normal = low^kappa, every pixel interior to (0, 1)
    '''

    if not kappa > 0:
        raise InvalidInputError('Power-law exponent (%s) must be positive' % kappa)

    values = np.linspace(0.05, 0.95, size * size).reshape(size, size)
    low = np.repeat(values[:, :, None], 3, axis=2)
    return low, np.power(low, kappa)
