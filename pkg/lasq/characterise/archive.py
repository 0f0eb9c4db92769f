import csv
import logging
import os

import h5py
import numpy as np

from lasq.errors import UnwritablePathError


logger = logging.getLogger(__name__)


def write_csv(path, header, rows):
    '''
        Write rows under a header line, floats in round-trip precision
    '''

    def _format(value):
        if isinstance(value, (float, np.floating)):
            return '%.17g' % value
        return value

    try:
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_format(_) for _ in row])
    except OSError as error:
        raise UnwritablePathError('Could not write (%s): %s' % (path, error))

    logger.info('Wrote %s', path)


def write_archive(path, fields, indexing):
    '''
        Save result fields to an HDF5 archive

        fields maps dataset names to arrays. indexing is a list of
        [name, values] pairs describing the sweep axes; their names are also
        stored, in order, under indexing/order.
    '''

    folder = os.path.dirname(os.path.abspath(path))

    # check if the output folder exists
    if not os.path.exists(folder):
        os.makedirs(folder)

    try:
        hdf_file = h5py.File(path, 'w')
    except OSError as error:
        raise UnwritablePathError('Could not write (%s): %s' % (path, error))

    with hdf_file:

        # save the result fields
        for key, values in fields.items():
            hdf_file.create_dataset(key, data=np.asarray(values))

        # save the indexing information
        indexing_group = hdf_file.create_group('indexing')
        order = [_[0].encode('ascii', 'ignore') for _ in indexing]
        indexing_group.create_dataset('order', data=np.array(order, dtype='S32'))
        for name, values in indexing:
            indexing_group.create_dataset(name, data=np.asarray(values, dtype=np.float64))

    logger.info('Wrote %s', path)
