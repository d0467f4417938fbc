"""Experiment configuration: the true spectrum, the sample shape and the methods to compare."""

import json
import logging
import os
import re

import numpy as np

from eigeninfer.benchmark.errors import InvalidConfigError
from eigeninfer.result import RejectionThresholds
from eigeninfer.spectrum import Family, Field, SpectrumModel, as_enum

LOGGER = logging.getLogger(__name__)

METHOD_PATTERN = re.compile(r'^(?P<name>[a-z-]+?)(?:-(?P<k>\d+))?$')
INT_KEYS = ('n', 't', 'ensemble_size', 'seed')
FLOAT_KEYS = tuple(RejectionThresholds.DEFAULTS)
LIST_KEYS = ('eigenvalues', 'weights')


def _as_bool(value):
    if isinstance(value, bool):
        return value

    text = str(value).strip().lower()
    if text in ('1', 'true', 'yes', 'on'):
        return True

    if text in ('0', 'false', 'no', 'off'):
        return False

    raise InvalidConfigError(f'Invalid boolean {value!r}.')


class MethodSpec:
    """One inference method of an experiment.

    Args:
        name (str):
            ``analytic``, ``analytic-dual``, ``statistical`` or ``statistical-dual``.
        m (int):
            Number of atoms to fit.
        k (int):
            Dimension of ``Q`` for the statistical methods.
        warm_start (bool):
            Start the statistical minimizer from the analytic estimate.
        starts (int):
            Number of minimizer starts.
        label (str or None):
            Name used in reports and file names. Built from the options if ``None``.
    """

    NAMES = ('analytic', 'analytic-dual', 'statistical', 'statistical-dual')
    OPTIONS = ('m', 'k', 'warm_start', 'starts', 'label')

    def __init__(self, name, m=2, k=3, warm_start=False, starts=8, label=None):
        if name not in self.NAMES:
            raise InvalidConfigError(
                f'Unknown method {name!r}. Use one of: {", ".join(self.NAMES)}')

        self.name = name
        try:
            self.m = int(m)
            self.k = int(k)
            self.starts = int(starts)
        except (TypeError, ValueError) as error:
            raise InvalidConfigError(f'Invalid option for method {name!r}: {error}') from error

        self.warm_start = _as_bool(warm_start)
        self.label = label or self._default_label()

    def _default_label(self):
        if not self.is_statistical:
            return f'{self.name}-m{self.m}'

        label = f'{self.name}-k{self.k}'
        if self.m != 2:
            label += f'-m{self.m}'

        return label + ('-warm' if self.warm_start else '')

    @property
    def family(self):
        """Family: Moment family the method works with."""
        return Family.DUAL if self.name.endswith('-dual') else Family.NORMAL

    @property
    def is_statistical(self):
        """bool: Whether the method minimizes the fluctuation likelihood."""
        return self.name.startswith('statistical')

    @classmethod
    def parse(cls, text):
        """Parse ``name[:option=value,...]``.

        The ``statistical-<k>`` and ``statistical-dual-<k>`` shorthands set ``k``.
        """
        name, _, options = text.strip().partition(':')
        match = METHOD_PATTERN.match(name.strip().lower())
        if match is None:
            raise InvalidConfigError(f'Invalid method {text!r}.')

        kwargs = {}
        if match.group('k'):
            kwargs['k'] = int(match.group('k'))

        for option in filter(None, (part.strip() for part in options.split(','))):
            key, separator, value = option.partition('=')
            key = key.strip()
            if not separator or key not in cls.OPTIONS:
                raise InvalidConfigError(f'Invalid option {option!r} in method {text!r}.')

            kwargs[key] = value.strip()

        return cls(match.group('name'), **kwargs)

    def to_text(self):
        """Serialize as ``name:option=value,...``."""
        options = [f'm={self.m}']
        if self.is_statistical:
            options += [
                f'k={self.k}',
                f'warm_start={str(self.warm_start).lower()}',
                f'starts={self.starts}',
            ]

        if self.label != self._default_label():
            options.append(f'label={self.label}')

        return f'{self.name}:{",".join(options)}'

    def validate(self, n, t):
        """Check that a sample of shape ``n x t`` can feed this method."""
        if self.m < 1:
            raise InvalidConfigError(f'Method {self.label} needs m >= 1.')

        if self.family is Family.DUAL and n >= t:
            raise InvalidConfigError(f'Method {self.label} needs N < T.')

        if self.is_statistical:
            if self.k not in (3, 4, 5) or self.m not in (2, 3) or self.k < 2 * self.m - 1:
                raise InvalidConfigError(
                    f'Method {self.label} needs k in (3, 4, 5), m in (2, 3) and k >= 2m - 1.')

            if self.starts < 1:
                raise InvalidConfigError(f'Method {self.label} needs at least one start.')

    def __eq__(self, other):
        return isinstance(other, MethodSpec) and vars(self) == vars(other)

    def __repr__(self):
        return f'MethodSpec({self.to_text()!r})'


def parse_methods(text):
    """Parse a ``;`` separated list of methods."""
    if isinstance(text, (list, tuple)):
        return [
            method if isinstance(method, MethodSpec) else MethodSpec.parse(method)
            for method in text
        ]

    return [MethodSpec.parse(part) for part in str(text).split(';') if part.strip()]


class ExperimentConfig:
    """Configuration of one benchmark experiment.

    Every key has a default in ``DEFAULTS``. Atoms keep the order in which they are
    given, which is also the column order of the report.

    Args:
        **kwargs:
            Any of the keys of ``DEFAULTS``.
    """

    DEFAULTS = {
        'eigenvalues': [2.0, 1.0],
        'weights': [0.5, 0.5],
        'n': 320,
        't': 640,
        'ensemble_size': 100,
        'field': 'complex',
        'methods': 'analytic:m=2; statistical:k=3',
        'seed': 0,
        'output_dir': 'results',
        **RejectionThresholds.DEFAULTS,
    }

    def __init__(self, **kwargs):
        unknown = set(kwargs) - set(self.DEFAULTS)
        if unknown:
            raise InvalidConfigError(f'Unknown configuration keys: {sorted(unknown)}')

        values = dict(self.DEFAULTS, **kwargs)
        try:
            for key in LIST_KEYS:
                value = values[key]
                if isinstance(value, str):
                    value = [item for item in re.split(r'[,\s]+', value.strip()) if item]

                values[key] = [float(item) for item in value]

            for key in INT_KEYS:
                values[key] = int(values[key])

            for key in FLOAT_KEYS:
                values[key] = float(values[key])

            values['field'] = as_enum(Field, values['field'])
        except (TypeError, ValueError) as error:
            raise InvalidConfigError(str(error)) from error

        values['methods'] = parse_methods(values['methods'])
        values['output_dir'] = str(values['output_dir'])
        for key, value in values.items():
            setattr(self, key, value)

        self.validate()

    @property
    def model(self):
        """SpectrumModel: The true spectrum of ``Sigma``."""
        return SpectrumModel(self.eigenvalues, self.weights)

    @property
    def r(self):
        """float: Rectangularity ``N / T``."""
        return self.n / self.t

    @property
    def thresholds(self):
        """RejectionThresholds: Rejection limits of this experiment."""
        return RejectionThresholds(**{key: getattr(self, key) for key in FLOAT_KEYS})

    @property
    def atom_order(self):
        """numpy.ndarray: Position in the configuration of each atom, sorted descending."""
        return np.argsort(-np.asarray(self.eigenvalues), kind='stable')

    def validate(self):
        """Check the configuration for consistency.

        Raises:
            InvalidConfigError:
                If any value is out of range or inconsistent with the others.
        """
        if self.ensemble_size < 1:
            raise InvalidConfigError('The ensemble size must be at least 1.')

        if self.n < 2 or self.t < 2:
            raise InvalidConfigError('N and T must be at least 2.')

        if len(set(self.eigenvalues)) != len(self.eigenvalues):
            raise InvalidConfigError('Eigenvalues must be distinct.')

        if self.min_eigenvalue >= self.max_eigenvalue:
            raise InvalidConfigError('The admissible eigenvalue range is empty.')

        try:
            self.model.multiplicities(self.n)
        except ValueError as error:
            raise InvalidConfigError(str(error)) from error

        if not self.methods:
            raise InvalidConfigError('At least one method is needed.')

        labels = [method.label for method in self.methods]
        if len(set(labels)) != len(labels):
            raise InvalidConfigError(f'Method labels must be unique, got {labels}.')

        for method in self.methods:
            method.validate(self.n, self.t)

    def to_dict(self):
        """Get a dict representation with plain values."""
        config = {key: getattr(self, key) for key in self.DEFAULTS}
        config['field'] = self.field.value
        config['methods'] = '; '.join(method.to_text() for method in self.methods)
        return config

    @classmethod
    def from_dict(cls, config):
        """Build a configuration from a dict."""
        return cls(**config)

    def to_text(self):
        """Serialize as flat ``key = value`` lines."""
        lines = []
        for key, value in self.to_dict().items():
            if isinstance(value, list):
                value = ', '.join(repr(item) for item in value)

            lines.append(f'{key} = {value}')

        return '\n'.join(lines) + '\n'

    @classmethod
    def from_text(cls, text, base=None):
        """Parse flat ``key = value`` lines. Blank lines and ``#`` comments are skipped.

        Keys that are not given keep their value from the ``base`` dict, if any, or their
        default.
        """
        config = dict(base or {})
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue

            key, separator, value = line.partition('=')
            if not separator:
                raise InvalidConfigError(f'Line {number} is not a key = value pair: {line!r}')

            config[key.strip()] = value.strip()

        return cls(**config)

    @classmethod
    def load(cls, path, base=None):
        """Load a configuration from a JSON file or a flat ``key = value`` file.

        Args:
            path (str):
                Path of the configuration file.
            base (dict or None):
                Values for the keys the file does not set, such as a preset.
        """
        with open(path, encoding='utf-8') as config_file:
            text = config_file.read()

        if os.path.splitext(path)[1].lower() == '.json' or text.lstrip().startswith('{'):
            try:
                values = json.loads(text)
            except json.JSONDecodeError as error:
                raise InvalidConfigError(f'Invalid JSON in {path}: {error}') from error

            return cls.from_dict(dict(base or {}, **values))

        return cls.from_text(text, base)

    def __eq__(self, other):
        return isinstance(other, ExperimentConfig) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f'ExperimentConfig({self.to_dict()})'


PRESETS = {
    'table1-320x640': {
        'eigenvalues': [2.0, 1.0],
        'weights': [0.5, 0.5],
        'n': 320,
        't': 640,
        'methods': 'analytic:m=2; analytic-dual:m=2; statistical:k=3',
    },
    'table1-320x160': {
        'eigenvalues': [2.0, 1.0],
        'weights': [0.5, 0.5],
        'n': 320,
        't': 160,
        'methods': 'analytic:m=2; statistical:k=3',
    },
    'table2-126x180': {
        'eigenvalues': [0.5, 1.0],
        'weights': [1 / 3, 2 / 3],
        'n': 126,
        't': 180,
        'methods': (
            'analytic:m=2; analytic-dual:m=2; statistical:k=3; '
            'statistical:k=3,warm_start=true; statistical:k=4; statistical:k=4,warm_start=true; '
            'statistical-dual:k=3; statistical-dual:k=3,warm_start=true'
        ),
    },
    'table2-90x9000': {
        'eigenvalues': [0.5, 1.0],
        'weights': [1 / 3, 2 / 3],
        'n': 90,
        't': 9000,
        'methods': (
            'analytic:m=2; analytic-dual:m=2; statistical:k=3; '
            'statistical:k=3,warm_start=true; statistical:k=4; statistical:k=4,warm_start=true; '
            'statistical-dual:k=3; statistical-dual:k=3,warm_start=true'
        ),
    },
    'table3-320x640-real': {
        'eigenvalues': [2.0, 1.0],
        'weights': [0.5, 0.5],
        'n': 320,
        't': 640,
        'field': 'real',
        'methods': 'analytic:m=2; statistical:k=3',
    },
}


def get_preset(name, **overrides):
    """Build the configuration of a named preset, applying ``overrides`` on top."""
    if name not in PRESETS:
        raise InvalidConfigError(
            f'Unknown preset {name!r}. Use one of: {", ".join(sorted(PRESETS))}')

    return ExperimentConfig(**dict(PRESETS[name], **overrides))
