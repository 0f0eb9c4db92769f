import logging
import os

import numpy as np

from lasq.characterise.archive import write_archive, write_csv
from lasq.errors import InvalidInputError
from lasq.measure.metrics import psnr, ssim
from lasq.pipeline import LasqPipeline


logger = logging.getLogger(__name__)


SWEEPABLE = ['lao.alpha', 'lao.eta', 'lao.delta', 'sampler.lambda', 'sampler.levels']


def sweep_parameter(parameter, values, pairs, config):
    '''
        Hierarchy-only enhancement of every pair for each value of one
        parameter, recording the mean PSNR and SSIM against ground truth

        Returns a dictionary of lists keyed by the parameter name and the
        measured fields.
    '''

    if parameter not in SWEEPABLE:
        raise InvalidInputError('Parameter (%s) not in valid list %s' % (parameter, SWEEPABLE))
    if not pairs:
        raise InvalidInputError('Sweep needs at least one (dark, truth) pair')

    # create a results dictionary
    results = {parameter: [], 'psnr_db': [], 'ssim': [], 'input_psnr_db': []}

    input_psnr = float(np.mean([psnr(dark, truth) for dark, truth in pairs]))
    small = min(min(truth.shape[:2]) for _, truth in pairs) < 11

    # loop through the parameter values
    for value in values:

        step_config = config.copy()
        step_config.set(parameter, value)
        step_config.validate()
        pipeline = LasqPipeline(step_config)

        scores = []
        for dark, truth in pairs:
            out, _ = pipeline.enhance(dark)
            scores.append((psnr(out, truth), np.nan if small else ssim(out, truth)))

        results[parameter].append(step_config[parameter])
        results['psnr_db'].append(float(np.mean([_[0] for _ in scores])))
        results['ssim'].append(float(np.mean([_[1] for _ in scores])))
        results['input_psnr_db'].append(input_psnr)

        logger.info('%s = %s: PSNR %0.3f dB, SSIM %0.4f', parameter, step_config[parameter],
                    results['psnr_db'][-1], results['ssim'][-1])

    return results


def write_sweep(out_dir, parameter, results):
    '''
        Save sweep.csv and sweep.hdf5
    '''

    if not os.path.exists(out_dir):
        os.makedirs(out_dir)

    header = [parameter, 'psnr_db', 'ssim', 'input_psnr_db']
    rows = zip(*[results[_] for _ in header])
    write_csv(os.path.join(out_dir, 'sweep.csv'), header, rows)

    fields = {_: results[_] for _ in header[1:]}
    write_archive(os.path.join(out_dir, 'sweep.hdf5'), fields, [[parameter, results[parameter]]])
