import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from lasq.errors import InvalidInputError, ShapeError


def check_grid(x, name='grid'):
    '''
        Return x as a finite 2D float64 array or raise
    '''

    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
        raise ShapeError('The %s must be a non-empty 2D array, got shape %s' % (name, x.shape))
    if not np.all(np.isfinite(x)):
        raise InvalidInputError('The %s contains non-finite values' % name)
    return x


def _window_bounds(length, radius):

    index = np.arange(length)
    start = np.clip(index - radius, 0, length)
    end = np.clip(index + radius + 1, 0, length)
    return start, end


def box_sum(x, radius):
    '''
        Windowed sums and window pixel counts over the (2r+1)^2 window
        clipped at the image borders, evaluated with an integral image

        The sums are of x - ref with ref = x[0, 0], so a constant input gives
        exactly zero sums instead of integral-image cancellation residue.
        Returns (sums, counts, ref).
    '''

    rows, cols = x.shape
    ref = float(x.flat[0])

    # integral image with a leading row and column of zeros
    integral = np.zeros((rows + 1, cols + 1))
    integral[1:, 1:] = np.cumsum(np.cumsum(x - ref, axis=0), axis=1)

    r0, r1 = _window_bounds(rows, radius)
    c0, c1 = _window_bounds(cols, radius)

    sums = (integral[np.ix_(r1, c1)] - integral[np.ix_(r0, c1)]
            - integral[np.ix_(r1, c0)] + integral[np.ix_(r0, c0)])
    counts = np.outer(r1 - r0, c1 - c0).astype(np.float64)

    return sums, counts, ref


def box_mean(x, radius):
    '''
        Mean over the border-clipped window
    '''

    x = check_grid(x)
    if radius < 0:
        raise InvalidInputError('The window radius (%s) must be non-negative' % radius)

    sums, counts, ref = box_sum(x, int(radius))
    return ref + sums / counts


def box_moments(x, radius):
    '''
        Windowed mean and variance of x

        Windows are clipped at the image bounds and normalised by the number
        of pixels actually covered. The variance is E[d^2] - E[d]^2 of the
        shifted values d = x - x[0, 0], floored at zero, which is exactly
        zero on constant input.
    '''

    x = check_grid(x)
    if radius < 0:
        raise InvalidInputError('The window radius (%s) must be non-negative' % radius)
    radius = int(radius)

    sums, counts, ref = box_sum(x, radius)
    d = x - ref
    squares, _, _ = box_sum(d * d, radius)

    shifted_mean = sums / counts
    var = np.maximum(squares / counts - shifted_mean * shifted_mean, 0.0)

    return ref + shifted_mean, var


def conv2d(x, kernel, pad=None):
    '''
        Zero-padded cross-correlation of a 2D grid with an odd-sized kernel

        pad defaults to the kernel half-widths so the output keeps the size of x.
    '''

    x = check_grid(x)
    kernel = check_grid(kernel, 'kernel')

    kh, kw = kernel.shape
    if kh % 2 == 0 or kw % 2 == 0:
        raise InvalidInputError('Kernel dimensions must be odd, got %dx%d' % (kh, kw))

    if pad is None:
        pad = (kh // 2, kw // 2)
    ph, pw = pad

    padded = np.pad(x, ((ph, ph), (pw, pw)))
    windows = sliding_window_view(padded, (kh, kw))

    return np.einsum('ijkl,kl->ij', windows, kernel)


def conv2d_channels(x, weights, bias=None):
    '''
        Multi-channel same-size cross-correlation

        x has shape (rows, cols, in_channels), weights (out, in, kh, kw) and
        the result (rows, cols, out).
    '''

    x = np.asarray(x, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)

    if x.ndim != 3 or weights.ndim != 4 or weights.shape[1] != x.shape[2]:
        raise ShapeError('Input %s does not match weights %s' % (x.shape, weights.shape))

    kh, kw = weights.shape[2:]
    if kh % 2 == 0 or kw % 2 == 0:
        raise InvalidInputError('Kernel dimensions must be odd, got %dx%d' % (kh, kw))

    padded = np.pad(x, ((kh // 2, kh // 2), (kw // 2, kw // 2), (0, 0)))

    # windows has shape (rows, cols, in_channels, kh, kw)
    windows = sliding_window_view(padded, (kh, kw), axis=(0, 1))
    out = np.einsum('hwcij,ocij->hwo', windows, weights)

    if bias is not None:
        out = out + np.asarray(bias, dtype=np.float64)
    return out


def avg_pool2(x):
    '''
        Halve the first two dimensions by 2x2 averaging
    '''

    x = np.asarray(x, dtype=np.float64)
    if x.ndim < 2:
        raise ShapeError('avg_pool2 needs at least 2 dimensions, got shape %s' % (x.shape,))

    rows, cols = x.shape[:2]
    if rows % 2 or cols % 2:
        raise InvalidInputError('avg_pool2 needs even dimensions, got %dx%d' % (rows, cols))

    blocks = x.reshape((rows // 2, 2, cols // 2, 2) + x.shape[2:])
    return blocks.mean(axis=(1, 3))


def resize_matrix(n_in, n_out):
    '''
        Corner-aligned linear interpolation matrix of shape (n_out, n_in)
    '''

    if n_in < 1 or n_out < 1:
        raise InvalidInputError('Resize lengths must be positive (%d -> %d)' % (n_in, n_out))

    matrix = np.zeros((n_out, n_in))

    # sample positions in source coordinates
    if n_out == 1 or n_in == 1:
        position = np.full(n_out, (n_in - 1) / 2.0)
    else:
        position = np.arange(n_out) * (n_in - 1) / (n_out - 1)

    lower = np.clip(np.floor(position).astype(int), 0, n_in - 1)
    upper = np.minimum(lower + 1, n_in - 1)
    frac = position - lower

    rows = np.arange(n_out)
    np.add.at(matrix, (rows, lower), 1.0 - frac)
    np.add.at(matrix, (rows, upper), frac)

    return matrix


def bilinear_resize(x, rows, cols):
    '''
        Bilinear resize with corner-aligned sampling

        Works on (rows, cols) grids and on (rows, cols, channels) stacks.
    '''

    x = np.asarray(x, dtype=np.float64)
    if x.ndim not in (2, 3):
        raise ShapeError('bilinear_resize expects 2D or 3D input, got shape %s' % (x.shape,))

    row_matrix = resize_matrix(x.shape[0], rows)
    col_matrix = resize_matrix(x.shape[1], cols)

    if x.ndim == 2:
        return row_matrix @ x @ col_matrix.T
    return np.einsum('ij,jkc,lk->ilc', row_matrix, x, col_matrix)


def bilinear_resize_adjoint(grad, rows, cols):
    '''
        Adjoint of bilinear_resize: maps a gradient on the resized grid back
        onto a grid of the original (rows, cols)
    '''

    grad = np.asarray(grad, dtype=np.float64)
    row_matrix = resize_matrix(rows, grad.shape[0])
    col_matrix = resize_matrix(cols, grad.shape[1])

    if grad.ndim == 2:
        return row_matrix.T @ grad @ col_matrix
    return np.einsum('ij,ikc,kl->jlc', row_matrix, grad, col_matrix)


def pairwise_sum(values, axis=0):
    '''
        Order-independent reduction along an axis by pairwise halving
    '''

    values = np.moveaxis(np.asarray(values, dtype=np.float64), axis, 0)

    while values.shape[0] > 1:
        if values.shape[0] % 2:
            values = np.concatenate([values, np.zeros((1,) + values.shape[1:])], axis=0)
        values = values[0::2] + values[1::2]

    return values[0]


def conv2d_channels_backward(x, weights, grad_out):
    '''
        Gradients of conv2d_channels with respect to its input, weights and bias

        The input gradient is the same-size correlation of grad_out with the
        spatially flipped kernels, in and out channels swapped.
    '''

    x = np.asarray(x, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    grad_out = np.asarray(grad_out, dtype=np.float64)

    if grad_out.shape != x.shape[:2] + (weights.shape[0],):
        raise ShapeError('Output gradient %s does not match input %s and weights %s' % (grad_out.shape, x.shape, weights.shape))

    kh, kw = weights.shape[2:]
    padded = np.pad(x, ((kh // 2, kh // 2), (kw // 2, kw // 2), (0, 0)))
    windows = sliding_window_view(padded, (kh, kw), axis=(0, 1))

    grad_weights = np.einsum('hwcij,hwo->ocij', windows, grad_out)
    grad_bias = grad_out.sum(axis=(0, 1))

    flipped = weights.transpose(1, 0, 2, 3)[:, :, ::-1, ::-1]
    grad_x = conv2d_channels(grad_out, flipped)

    return grad_x, grad_weights, grad_bias
