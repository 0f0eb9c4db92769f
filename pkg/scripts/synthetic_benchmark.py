import copy
import os

import yaml

from lasq.characterise.synthetic import synthetic_pairs
from lasq.characterise.sweep import sweep_parameter, write_sweep
from lasq.cli.config import RunConfig
from lasq.pipeline import LasqPipeline, enhancement_gain, toy_luminance_errors
from lasq.plot.plot import plot_sweep


# read in the sweep definitions
with open(r'configs/sweeps.yaml') as file:
    sweeps = yaml.safe_load(file)

sweep_config = sweeps['config']
parameters = copy.deepcopy(sweeps)
del parameters['config']

# create the benchmark pairs
pairs = synthetic_pairs(sweep_config['count'], sweep_config['size'])
config = RunConfig()


# baseline gain at the default settings
pipeline = LasqPipeline(config)
gains = [enhancement_gain(pipeline, dark, truth) for dark, truth in pairs]

print('-'*150)
print('PSNR GAIN AT DEFAULT SETTINGS: %s' % ', '.join('%0.2f' % _ for _ in gains))
print('%d of %d pairs improve by at least 3 dB' % (sum(_ >= 3.0 for _ in gains), len(gains)))
print('-'*150)


# loop through each of the parameters running the sweep
for parameter in parameters:

    print('-'*150)
    print('SWEEPING PARAMETER: ', parameter)
    print('-'*150)

    results = sweep_parameter(parameter, parameters[parameter]['values'], pairs, config)

    out_dir = os.path.join(sweep_config['out'], parameter)
    write_sweep(out_dir, parameter, results)
    plot_sweep(parameter, results, os.path.join(out_dir, 'sweep.png'))

    for value, score in zip(results[parameter], results['psnr_db']):
        print('%s = %s: %0.3f dB' % (parameter, value, score))


# toy denoiser: train on the synthetic set, then sample each dark image
toy_config = RunConfig({'diffusion.T': 16, 'sampler.levels': 4, 'train.steps': 200, 'train.lr': 1e-3,
                        'infer.steps': 8, 'encoder.k': 1})
_, errors = toy_luminance_errors(toy_config, synthetic_pairs(16, 16))

print('-'*150)
print('TOY DENOISER MEAN LUMINANCE ERROR: %s' % ', '.join('%0.3f' % _ for _ in errors))
print('%d of %d outputs within 0.1 of the target mean luminance' % (sum(_ <= 0.1 for _ in errors), len(errors)))
print('-'*150)
