import logging
import struct

import numpy as np

from lasq.denoiser.network import DenoiserParams, layer_shapes
from lasq.errors import CheckpointError, MissingFileError, UnwritablePathError


logger = logging.getLogger(__name__)


MAGIC = b'LASQ'
VERSION = 1


def encode_checkpoint(params):
    '''
        Flat binary form: magic, u32 version, then per tensor a u32 rank,
        u32 dimensions and little-endian float64 data, in declaration order
    '''

    chunks = [MAGIC, struct.pack('<I', VERSION)]
    for tensor in params.tensors():
        chunks.append(struct.pack('<I', tensor.ndim))
        chunks.append(struct.pack('<%dI' % tensor.ndim, *tensor.shape))
        chunks.append(np.ascontiguousarray(tensor, dtype='<f8').tobytes())

    return b''.join(chunks)


def decode_checkpoint(data):

    if data[:4] != MAGIC:
        raise CheckpointError('Checkpoint magic %r is not %r' % (data[:4], MAGIC))
    if len(data) < 8:
        raise CheckpointError('Checkpoint is truncated before its version')

    version = struct.unpack_from('<I', data, 4)[0]
    if version != VERSION:
        raise CheckpointError('Checkpoint version (%d) is not supported, expected %d' % (version, VERSION))

    tensors = []
    offset = 8
    while offset < len(data):

        if offset + 4 > len(data):
            raise CheckpointError('Checkpoint is truncated in a tensor header')
        ndim = struct.unpack_from('<I', data, offset)[0]
        offset += 4

        if offset + 4 * ndim > len(data):
            raise CheckpointError('Checkpoint is truncated in a tensor shape')
        shape = struct.unpack_from('<%dI' % ndim, data, offset)
        offset += 4 * ndim

        size = 8 * int(np.prod(shape, dtype=np.int64))
        if offset + size > len(data):
            raise CheckpointError('Checkpoint is truncated in tensor %d' % len(tensors))
        tensors.append(np.frombuffer(data, dtype='<f8', count=size // 8, offset=offset).reshape(shape).astype(np.float64))
        offset += size

    if len(tensors) != len(DenoiserParams.names()):
        raise CheckpointError('Checkpoint holds %d tensors, expected %d' % (len(tensors), len(DenoiserParams.names())))

    params = DenoiserParams.from_tensors(tensors)
    expected = layer_shapes(params.channels)
    if [_.shape for _ in params.tensors()] != expected:
        raise CheckpointError('Checkpoint tensor shapes do not match the denoiser layout')

    return params


def save_checkpoint(params, path):

    try:
        with open(path, 'wb') as f:
            f.write(encode_checkpoint(params))
    except OSError as error:
        raise UnwritablePathError('Could not write (%s): %s' % (path, error))

    logger.info('Wrote checkpoint %s', path)


def load_checkpoint(path):

    try:
        with open(path, 'rb') as f:
            data = f.read()
    except FileNotFoundError:
        raise MissingFileError('The checkpoint (%s) does not exist' % path)

    return decode_checkpoint(data)
