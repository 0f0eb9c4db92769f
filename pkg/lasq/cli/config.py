import os

import yaml

from lasq.denoiser.codec import EncoderConfig
from lasq.denoiser.train import TrainConfig
from lasq.diffusion.schedule import build_schedule
from lasq.enhance.lao import LaoParams
from lasq.enhance.luminance import GuidedFilterParams
from lasq.errors import ConfigError, InvalidInputError
from lasq.sample.chain import ChainConfig


SEED_VARIABLE = 'LASQ_SEED'


def _parse_bool(text):

    lowered = text.strip().lower()
    if lowered in ('true', 'yes', '1', 'on'):
        return True
    if lowered in ('false', 'no', '0', 'off'):
        return False
    raise ValueError('expected true or false, got %r' % text)


def _parse_optional_float(text):

    if text.strip().lower() in ('none', ''):
        return None
    return float(text)


def _choice(*options):

    def parse(text):
        value = text.strip()
        if value not in options:
            raise ValueError('expected one of %s, got %r' % (', '.join(options), value))
        return value

    return parse


def _seed(text):

    value = int(text)
    if not 0 <= value < 2**64:
        raise ValueError('seed must fit in an unsigned 64-bit integer')
    return value


def _at_least(low, parse=int):

    def check(text):
        value = parse(text)
        if value < low:
            raise ValueError('must be at least %s' % low)
        return value

    return check


def _positive(text):

    value = float(text)
    if not value > 0:
        raise ValueError('must be positive')
    return value


def _unit_open(text):

    value = float(text)
    if not 0 < value < 1:
        raise ValueError('must lie in (0, 1)')
    return value


def _optional_positive(text):

    value = _parse_optional_float(text)
    if value is not None and not value > 0:
        raise ValueError('must be positive or none')
    return value


# key -> (parser, default)
SCHEMA = {  'seed'                  :   (_seed, 0),
            'verbose'               :   (_parse_bool, False),
            'luminance.radius'      :   (_at_least(1), 8),
            'luminance.eps'         :   (_positive, 0.01),
            'lao.alpha'             :   (_positive, 0.15),
            'lao.eta'               :   (_at_least(0.0, float), 1.0),
            'lao.delta'             :   (_positive, 0.01),
            'lao.channels'          :   (_choice('rgb', 'y'), 'rgb'),
            'sampler.sigma'         :   (_optional_positive, None),
            'sampler.lambda'        :   (_positive, 0.2),
            'sampler.levels'        :   (_at_least(1), 4),
            'sampler.variant'       :   (_choice('full', 'fixed', 'two_layer'), 'full'),
            'diffusion.T'           :   (_at_least(1), 1000),
            'diffusion.beta_start'  :   (_unit_open, 1e-4),
            'diffusion.beta_end'    :   (_unit_open, 0.02),
            'diffusion.tau_schedule':   (_choice('linear', 'constant'), 'linear'),
            'diffusion.tau_max'     :   (_at_least(0.0, float), 0.05),
            'diffusion.psi'         :   (_choice('floor', 'ceil'), 'floor'),
            'diffusion.lambda_d'    :   (_at_least(0.0, float), 0.9),
            'diffusion.lambda_g'    :   (_at_least(0.0, float), 0.005),
            'encoder.k'             :   (_at_least(0), 3),
            'encoder.channels'      :   (_at_least(1), 3),
            'train.steps'           :   (_at_least(0), 200),
            'train.lr'              :   (_at_least(0.0, float), 2e-5),
            'infer.steps'           :   (_at_least(1), 10)}


def _format(value):

    if value is None:
        return 'none'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


class RunConfig():
    '''
        Flat namespaced run configuration with typed defaults
    '''

    def __init__(self, values=None):

        self.values = {key: default for key, (_, default) in SCHEMA.items()}
        if values:
            for key, value in values.items():
                self.set(key, value)


    def __getitem__(self, key):
        return self.values[key]


    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.values == other.values


    def set(self, key, value, line=None):
        '''
            Parse and store one value, raising ConfigError on unknown keys or
            unparsable values
        '''

        prefix = 'line %d: ' % line if line is not None else ''

        if key not in SCHEMA:
            raise ConfigError('%sParameter (%s) not in valid list of configuration keys' % (prefix, key))

        parse = SCHEMA[key][0]
        try:
            self.values[key] = parse(_format(value) if not isinstance(value, str) else value)
        except (TypeError, ValueError) as error:
            raise ConfigError('%s%s: %s' % (prefix, key, error))


    def copy(self):
        return RunConfig(dict(self.values))


    def validate(self):
        '''
            Build every component once so its own invariants are checked
        '''

        try:
            self.guided_filter_params()
            self.lao_params()
            self.chain_config()
            self.encoder_config()
            self.train_config()
            self.schedule()
        except InvalidInputError as error:
            raise ConfigError('Invalid configuration: %s' % error)

        return self


    def guided_filter_params(self):
        return GuidedFilterParams(radius=self['luminance.radius'], eps_gf=self['luminance.eps'])


    def lao_params(self):
        return LaoParams(alpha=self['lao.alpha'], eta=self['lao.eta'], delta=self['lao.delta'])


    def chain_config(self):
        return ChainConfig(step_lambda=self['sampler.lambda'], levels=self['sampler.levels'])


    def encoder_config(self):
        return EncoderConfig(k=self['encoder.k'], channels=self['encoder.channels'])


    def train_config(self):
        return TrainConfig(lr=self['train.lr'], lambda_d=self['diffusion.lambda_d'], lambda_g=self['diffusion.lambda_g'],
                           psi_ceil=self['diffusion.psi'] == 'ceil', encoder=self.encoder_config())


    def schedule(self):
        return build_schedule(self['diffusion.T'], self['diffusion.beta_start'], self['diffusion.beta_end'],
                              self['diffusion.tau_schedule'], self['diffusion.tau_max'])


def parse_config(text):
    '''
        Parse flat "key = value" text; '#' starts a comment
    '''

    config = RunConfig()
    for number, raw in enumerate(text.splitlines(), start=1):

        line = raw.split('#', 1)[0].strip()
        if not line:
            continue

        if '=' not in line:
            raise ConfigError('line %d: expected "key = value", got %r' % (number, raw.strip()))

        key, value = [_.strip() for _ in line.split('=', 1)]
        config.set(key, value, line=number)

    return config.validate()


def flatten_mapping(mapping, prefix=''):
    '''
        Nested mapping -> dotted keys
    '''

    flat = {}
    for key, value in mapping.items():
        name = prefix + str(key)
        if isinstance(value, dict):
            flat.update(flatten_mapping(value, name + '.'))
        else:
            flat[name] = value
    return flat


def parse_yaml_config(text):

    try:
        mapping = yaml.safe_load(text) or {}
    except yaml.YAMLError as error:
        raise ConfigError('Could not parse YAML configuration: %s' % error)

    if not isinstance(mapping, dict):
        raise ConfigError('A YAML configuration must be a mapping')

    config = RunConfig()
    for key, value in flatten_mapping(mapping).items():
        config.set(key, value)

    return config.validate()


def load_config(path):
    '''
        Read a configuration file, YAML when the extension says so
    '''

    try:
        with open(path) as f:
            text = f.read()
    except OSError as error:
        raise ConfigError('Could not read the configuration (%s): %s' % (path, error))

    if str(path).lower().endswith(('.yaml', '.yml')):
        return parse_yaml_config(text)
    return parse_config(text)


def serialize_config(config):
    '''
        Canonical "key = value" text, one line per key in schema order
    '''

    return ''.join('%s = %s\n' % (key, _format(config[key])) for key in SCHEMA)


def apply_environment(config, environ=None):
    '''
        LASQ_SEED overrides the configured seed
    '''

    environ = os.environ if environ is None else environ
    if SEED_VARIABLE in environ:
        config.set('seed', environ[SEED_VARIABLE])
    return config
