import argparse
import json
import logging
import os
import sys

from lasq.characterise.archive import write_csv
from lasq.characterise.lv import CLIP_EPS, estimate_kappas, lv_arrays, summarise_kappas, write_lv_scan
from lasq.characterise.synthetic import DARKEN_EXPONENT, darken, synthetic_pairs
from lasq.characterise.sweep import SWEEPABLE, sweep_parameter, write_sweep
from lasq.cli.config import RunConfig, apply_environment, load_config
from lasq.denoiser.checkpoint import load_checkpoint, save_checkpoint
from lasq.denoiser.codec import encode
from lasq.denoiser.train import ToyTrainer, infer
from lasq.diffusion.simulate import report_columns, simulate_forward, write_simulation
from lasq.errors import EXIT_OK, ConfigError, LasqError, UnwritablePathError, exit_code
from lasq.imageio.image import load_image, save_image
from lasq.measure.metrics import measure_pair
from lasq.numerics.rng import Rng
from lasq.pipeline import LasqPipeline, training_batch


logger = logging.getLogger(__name__)


IMAGE_EXTENSIONS = ('.ppm', '.png')


def _print_error(message):
    '''
        Red banner on stderr
    '''

    sys.stderr.write('\033[91m' + '-'*150 + '\n')
    sys.stderr.write('ERROR: %s\n' % message)
    sys.stderr.write('-'*150 + '\033[0m\n')


def _setup_logging(verbose):

    logging.basicConfig(format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger().setLevel(logging.INFO if verbose else logging.WARNING)


def _resolve_config(args, overrides=None):
    '''
        defaults < config file < explicit flags < LASQ_SEED
    '''

    config = load_config(args.config) if args.config else RunConfig()

    if args.seed is not None:
        config.set('seed', str(args.seed))
    if args.verbose:
        config.set('verbose', 'true')

    for key, value in (overrides or {}).items():
        if value is not None:
            config.set(key, str(value))

    apply_environment(config)
    config.validate()

    if config['verbose']:
        logging.getLogger().setLevel(logging.INFO)

    return config


def _write_provenance(path, record):

    try:
        with open(path, 'a') as f:
            f.write(json.dumps(record, sort_keys=True) + '\n')
    except OSError as error:
        raise UnwritablePathError('Could not write (%s): %s' % (path, error))


def _ensure_dir(path):

    if not os.path.exists(path):
        os.makedirs(path)


def cmd_enhance(args):

    config = _resolve_config(args, {'sampler.levels': args.levels})
    pipeline = LasqPipeline(config)

    img = load_image(args.input)
    params = load_checkpoint(args.checkpoint) if args.checkpoint else None

    out, result = pipeline.enhance(img, params)
    save_image(out, args.output)

    extra = {'input': args.input, 'output': args.output, 'checkpoint': args.checkpoint}
    _write_provenance(args.provenance or args.output + '.jsonl', pipeline.provenance(result, extra=extra))

    return EXIT_OK


def cmd_hierarchy(args):

    config = _resolve_config(args, {'sampler.levels': args.levels})
    pipeline = LasqPipeline(config)

    img = load_image(args.input)
    result = pipeline.build_hierarchy(img, Rng(config['seed']).fork(2)[0])

    _ensure_dir(args.out)

    for n, level in enumerate(result.stack.levels, start=1):
        save_image(level, os.path.join(args.out, 'level_%02d.%s' % (n, args.format)))

    # manifest: level, grid shape, operators
    lines = []
    for level, grid, gammas in result.manifest_rows():
        lines.append('%d %s %s\n' % (level, grid, ' '.join('%.17g' % _ for _ in gammas)))

    manifest = os.path.join(args.out, 'manifest.txt')
    try:
        with open(manifest, 'w') as f:
            f.write(''.join(lines))
    except OSError as error:
        raise UnwritablePathError('Could not write (%s): %s' % (manifest, error))

    return EXIT_OK


def cmd_lv_scan(args):

    _resolve_config(args)

    x, y = lv_arrays(load_image(args.low), load_image(args.normal))
    summary = summarise_kappas(estimate_kappas(x, y, args.clip_eps), args.bins)

    write_lv_scan(args.out, x, y, summary)

    if args.plot:
        from lasq.plot.plot import plot_kappa_histogram, plot_lv_scatter

        root, ext = os.path.splitext(args.plot)
        plot_lv_scatter(x, y, args.plot, kappas=summary.kappas)
        plot_kappa_histogram(estimate_kappas(x, y, args.clip_eps), root + '_kappa' + (ext or '.png'))

    return EXIT_OK


def cmd_diffuse_sim(args):

    overrides = {   'diffusion.T'           :   args.T,
                    'diffusion.tau_max'     :   args.tau,
                    'diffusion.tau_schedule':   args.tau_schedule,
                    'sampler.levels'        :   args.levels}
    config = _resolve_config(args, overrides)

    sched = config.schedule()
    rows = simulate_forward(sched, config['sampler.levels'], args.runs, Rng(config['seed']), dim=args.dim,
                            ceil=config['diffusion.psi'] == 'ceil')

    write_simulation(args.out, rows)

    if args.plot:
        from lasq.plot.plot import plot_diffusion_moments
        plot_diffusion_moments(report_columns(rows), args.plot)

    return EXIT_OK


def _training_pairs(data_dir):
    '''
        (dark, truth) pairs from a folder of normal-light images, or the
        synthetic set when no folder is given
    '''

    if not data_dir:
        return synthetic_pairs(16, 16)

    names = sorted(_ for _ in os.listdir(data_dir) if _.lower().endswith(IMAGE_EXTENSIONS))
    if not names:
        raise ConfigError('The data directory (%s) holds no .ppm or .png images' % data_dir)

    pairs = []
    for name in names:
        truth = load_image(os.path.join(data_dir, name))
        pairs.append((darken(truth, DARKEN_EXPONENT), truth))
    return pairs


def cmd_train_toy(args):

    overrides = {   'diffusion.T'   :   args.T,
                    'sampler.levels':   args.levels,
                    'train.steps'   :   args.steps,
                    'train.lr'      :   args.lr}
    config = _resolve_config(args, overrides)

    pipeline = LasqPipeline(config)
    encoder = config.encoder_config()
    pairs = _training_pairs(args.data)

    # one chain stream per training image
    streams = Rng(config['seed']).fork(len(pairs) + 1)
    batch = training_batch(pipeline, [dark for dark, _ in pairs], streams[1:], encoder)

    trainer = ToyTrainer(config.schedule(), config.train_config(), seed=streams[0].seed, verbose=config['verbose'])
    initial = trainer.evaluate(batch, seed=config['seed'])
    history = trainer.train(batch, config['train.steps'])
    final = trainer.evaluate(batch, seed=config['seed'])

    logger.info('Evaluation L_d %0.6f -> %0.6f', initial, final)

    save_checkpoint(trainer.params, args.out)

    rows = [(i + 1, _['loss'], _['loss_d'], _['loss_g']) for i, _ in enumerate(history)]
    write_csv(args.out + '.losses.csv', ['step', 'loss', 'loss_d', 'loss_g'], rows)

    return EXIT_OK


def cmd_infer(args):

    config = _resolve_config(args, {'infer.steps': args.steps})

    params = load_checkpoint(args.checkpoint)
    encoder = config.encoder_config()

    f_l = encode(load_image(args.input), encoder)
    out = infer(f_l, params, config.schedule(), config['infer.steps'], Rng(config['seed']), encoder)

    save_image(out, args.output)
    return EXIT_OK


def cmd_eval(args):

    _resolve_config(args)

    report = measure_pair(load_image(args.a), load_image(args.b))
    sys.stdout.write(report.as_csv() + '\n')
    return EXIT_OK


def cmd_sweep(args):

    config = _resolve_config(args)

    try:
        values = [float(_) if args.param != 'sampler.levels' else int(_) for _ in args.values.split(',')]
    except ValueError:
        raise ConfigError('Could not parse sweep values (%s)' % args.values)

    pairs = synthetic_pairs(args.count, args.size)
    results = sweep_parameter(args.param, values, pairs, config)

    write_sweep(args.out, args.param, results)

    if args.plot:
        from lasq.plot.plot import plot_sweep
        plot_sweep(args.param, results, args.plot)

    return EXIT_OK


def build_parser():

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None, help='random seed, overridden by LASQ_SEED')
    common.add_argument('--config', default=None, help='key = value or YAML configuration file')
    common.add_argument('--verbose', action='store_true', help='log progress at INFO')

    parser = argparse.ArgumentParser(prog='lasq', description='Luminance-adaptive low-light enhancement')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('enhance', parents=[common], help='enhance a low-light image')
    p.add_argument('--input', required=True)
    p.add_argument('--output', required=True)
    p.add_argument('--checkpoint', default=None, help='toy denoiser checkpoint')
    p.add_argument('--levels', type=int, default=None)
    p.add_argument('--provenance', default=None, help='JSONL record path, defaults to <output>.jsonl')
    p.set_defaults(handler=cmd_enhance)

    p = sub.add_parser('hierarchy', parents=[common], help='write the enhanced stack and its manifest')
    p.add_argument('--input', required=True)
    p.add_argument('--out', required=True)
    p.add_argument('--levels', type=int, default=None)
    p.add_argument('--format', choices=['ppm', 'png'], default='ppm')
    p.set_defaults(handler=cmd_hierarchy)

    p = sub.add_parser('lv-scan', parents=[common], help='luminance variation scan of a paired image')
    p.add_argument('--low', required=True)
    p.add_argument('--normal', required=True)
    p.add_argument('--out', required=True)
    p.add_argument('--bins', type=int, default=50)
    p.add_argument('--clip-eps', type=float, default=CLIP_EPS)
    p.add_argument('--plot', default=None)
    p.set_defaults(handler=cmd_lv_scan)

    p = sub.add_parser('diffuse-sim', parents=[common], help='compare forward-process moments')
    p.add_argument('--T', type=int, default=None)
    p.add_argument('--levels', type=int, default=None)
    p.add_argument('--tau', type=float, default=None, help='tau_max')
    p.add_argument('--tau-schedule', choices=['linear', 'constant'], default=None)
    p.add_argument('--runs', type=int, default=100000)
    p.add_argument('--dim', type=int, default=4)
    p.add_argument('--out', required=True)
    p.add_argument('--plot', default=None)
    p.set_defaults(handler=cmd_diffuse_sim)

    p = sub.add_parser('train-toy', parents=[common], help='train the toy denoiser')
    p.add_argument('--data', default=None, help='folder of normal-light images')
    p.add_argument('--out', required=True, help='checkpoint path')
    p.add_argument('--T', type=int, default=None)
    p.add_argument('--levels', type=int, default=None)
    p.add_argument('--steps', type=int, default=None)
    p.add_argument('--lr', type=float, default=None)
    p.set_defaults(handler=cmd_train_toy)

    p = sub.add_parser('infer', parents=[common], help='sample the toy denoiser conditioned on an image')
    p.add_argument('--input', required=True)
    p.add_argument('--checkpoint', required=True)
    p.add_argument('--output', required=True)
    p.add_argument('--steps', type=int, default=None)
    p.set_defaults(handler=cmd_infer)

    p = sub.add_parser('eval', parents=[common], help='print psnr_db,ssim of an image pair')
    p.add_argument('--a', required=True)
    p.add_argument('--b', required=True)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser('sweep', parents=[common], help='hyperparameter sensitivity on synthetic pairs')
    p.add_argument('--param', required=True, choices=SWEEPABLE)
    p.add_argument('--values', required=True, help='comma separated values')
    p.add_argument('--count', type=int, default=10)
    p.add_argument('--size', type=int, default=32)
    p.add_argument('--out', required=True)
    p.add_argument('--plot', default=None)
    p.set_defaults(handler=cmd_sweep)

    return parser


def main(argv=None):

    parser = build_parser()
    args = parser.parse_args(argv)

    _setup_logging(args.verbose)

    try:
        return args.handler(args)
    except (LasqError, OSError) as error:
        _print_error(error)
        return exit_code(error)


if __name__ == '__main__':
    sys.exit(main())
