from dataclasses import dataclass, fields

import numpy as np

from lasq.errors import ShapeError
from lasq.numerics.kernels import conv2d_channels, conv2d_channels_backward


HIDDEN = 16
KERNEL = 3


@dataclass
class DenoiserParams:
    '''
        Three 3x3 conv layers: (2C + 1) -> 16 -> 16 -> C
    '''

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    w3: np.ndarray
    b3: np.ndarray

    @classmethod
    def names(cls):
        return [_.name for _ in fields(cls)]

    @property
    def channels(self):
        return self.w3.shape[0]

    def tensors(self):
        '''
            Parameter arrays in declaration order
        '''

        return [getattr(self, _) for _ in self.names()]

    @classmethod
    def from_tensors(cls, tensors):
        return cls(*[np.asarray(_, dtype=np.float64) for _ in tensors])

    def copy(self):
        return DenoiserParams.from_tensors([_.copy() for _ in self.tensors()])

    def map(self, function, *others):
        '''
            Apply function tensor-wise across this and other parameter sets
        '''

        return DenoiserParams.from_tensors([function(*args) for args in zip(self.tensors(), *[_.tensors() for _ in others])])


def layer_shapes(channels):
    return [(HIDDEN, 2 * channels + 1, KERNEL, KERNEL), (HIDDEN,),
            (HIDDEN, HIDDEN, KERNEL, KERNEL), (HIDDEN,),
            (channels, HIDDEN, KERNEL, KERNEL), (channels,)]


def zero_params(channels=3):
    return DenoiserParams.from_tensors([np.zeros(_) for _ in layer_shapes(channels)])


def init_params(channels, rng):
    '''
        Glorot-uniform kernels in +-sqrt(6 / (fan_in + fan_out)), zero biases
    '''

    tensors = []
    for shape in layer_shapes(channels):
        if len(shape) == 1:
            tensors.append(np.zeros(shape))
            continue

        fan_out = shape[0] * shape[2] * shape[3]
        fan_in = shape[1] * shape[2] * shape[3]
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        tensors.append((2.0 * rng.uniform(shape) - 1.0) * limit)

    return DenoiserParams.from_tensors(tensors)


def network_input(x_t, t_embed, f_l):
    '''
        Channel stack [x_t, f_l, t/T]
    '''

    x_t = np.asarray(x_t, dtype=np.float64)
    f_l = np.asarray(f_l, dtype=np.float64)
    if x_t.ndim != 3 or x_t.shape != f_l.shape:
        raise ShapeError('State %s and condition %s must share a (rows, cols, C) shape' % (x_t.shape, f_l.shape))

    time = np.full(x_t.shape[:2] + (1,), float(t_embed))
    return np.concatenate([x_t, f_l, time], axis=2)


def denoiser_forward(x_t, t_embed, f_l, params, return_cache=False):
    '''
        Noise prediction eps_theta(x_t, t, F_L)

            conv3x3 -> ReLU -> conv3x3 -> ReLU -> conv3x3
    '''

    z0 = network_input(x_t, t_embed, f_l)
    if z0.shape[2] != params.w1.shape[1]:
        raise ShapeError('Input has %d channels, first layer expects %d' % (z0.shape[2], params.w1.shape[1]))

    a1 = conv2d_channels(z0, params.w1, params.b1)
    h1 = np.maximum(a1, 0.0)
    a2 = conv2d_channels(h1, params.w2, params.b2)
    h2 = np.maximum(a2, 0.0)
    out = conv2d_channels(h2, params.w3, params.b3)

    if return_cache:
        return out, (z0, a1, h1, a2, h2)
    return out


def denoiser_backward(grad_out, cache, params):
    '''
        Parameter gradients of a loss given its gradient on the network output
    '''

    z0, a1, h1, a2, h2 = cache

    grad_h2, grad_w3, grad_b3 = conv2d_channels_backward(h2, params.w3, grad_out)
    grad_a2 = grad_h2 * (a2 > 0)

    grad_h1, grad_w2, grad_b2 = conv2d_channels_backward(h1, params.w2, grad_a2)
    grad_a1 = grad_h1 * (a1 > 0)

    _, grad_w1, grad_b1 = conv2d_channels_backward(z0, params.w1, grad_a1)

    return DenoiserParams(grad_w1, grad_b1, grad_w2, grad_b2, grad_w3, grad_b3)
