#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Pipeline configuration.

A combination ("combo") is a YAML file holding the values that differ from
the defaults found in `defaults.yaml` next to this module. Combos given by
name are looked up in the `combos` directory of the data directory:

    >>> from graphalign.core.combo import Combination
    >>> combo = Combination.from_name('synthetic', {'gmm.rounds': 2})
    >>> combo['gmm']['mixtures']
    14
    >>> combo.runner.run('prep')
"""

# Built-in modules #
import copy
import hashlib
from functools import cached_property
from pathlib import Path

# Third party modules #
import yaml
import simplejson

# First party modules #
from plumbing.cache import property_cached

# Internal modules #
from graphalign import graphalign_data_pathlib, module_dir
from graphalign.core.errors import ConfigError
from graphalign.lexicon.inventory import EXCLUSION_CLASSES
from graphalign.corpus.synthetic import G2P_MODES

# Constants #
defaults_path = Path(str(module_dir)) / 'core' / 'defaults.yaml'
combos_dir    = graphalign_data_pathlib / 'combos'

###############################################################################
def load_defaults():
    with open(defaults_path, 'r', encoding='utf-8') as handle:
        return yaml.safe_load(handle)

def merge(base, update, prefix=''):
    """
    Copy of `base` updated recursively with `update`. Keys that do not
    exist in `base` are configuration errors.
    """
    result = copy.deepcopy(base)
    for key, value in (update or {}).items():
        dotted = prefix + str(key)
        if key not in result:
            raise ConfigError("Unknown configuration key '%s'." % dotted)
        if isinstance(result[key], dict):
            if not isinstance(value, dict):
                raise ConfigError("The key '%s' is a section, not a value." % dotted)
            result[key] = merge(result[key], value, dotted + '.')
        else:
            result[key] = value
    return result

def set_dotted(config, dotted, value):
    """Set the value at a dotted key such as `gmm.rounds`, in place."""
    *sections, leaf = dotted.split('.')
    node = config
    for section in sections:
        if not isinstance(node.get(section), dict):
            raise ConfigError("Unknown configuration key '%s'." % dotted)
        node = node[section]
    if leaf not in node or isinstance(node[leaf], dict):
        raise ConfigError("Unknown configuration key '%s'." % dotted)
    node[leaf] = value

def parse_value(text):
    """Command line values are parsed as YAML scalars, `2` is an int."""
    if not isinstance(text, str): return text
    try: return yaml.safe_load(text)
    except yaml.YAMLError: return text

def find_combo(name):
    """A path to an existing file, otherwise `<data>/combos/<name>.yaml`."""
    path = Path(name).expanduser()
    if path.is_file(): return path
    candidate = combos_dir / (str(name) + '.yaml')
    if candidate.is_file(): return candidate
    msg = "No configuration file '%s', and no combo of that name in '%s'."
    raise ConfigError(msg % (name, combos_dir))

###############################################################################
def check_positive(config, *keys):
    for dotted in keys:
        section, leaf = dotted.split('.')
        value = config[section][leaf]
        if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
            raise ConfigError("'%s' must be a positive number, got %r." % (dotted, value))

def check_non_negative(config, *keys):
    for dotted in keys:
        section, leaf = dotted.split('.')
        value = config[section][leaf]
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise ConfigError("'%s' must be a non-negative integer, got %r." % (dotted, value))

def check_choice(config, dotted, choices):
    section, leaf = dotted.split('.')
    value = config[section][leaf]
    if value not in choices:
        msg = "'%s' must be one of %s, got %r."
        raise ConfigError(msg % (dotted, list(choices), value))

def validate(config):
    """Raise `ConfigError` on the first invalid value."""
    for key in ('seed', 'workers'):
        if not isinstance(config[key], int) or isinstance(config[key], bool):
            raise ConfigError("'%s' must be an integer, got %r." % (key, config[key]))
    if config['workers'] < 1:
        raise ConfigError("'workers' must be at least 1.")
    check_positive(config, 'features.n_mels', 'features.window_ms', 'features.shift_ms',
                   'features.rate_factor', 'features.n_ceps', 'features.lpc_order',
                   'lexicon.min_count', 'gmm.n_states', 'gmm.mixtures', 'gmm.em_iters',
                   'gmm.variance_floor', 'am.layers', 'am.hidden', 'am.learning_rate',
                   'am.epochs', 'am.batch_size', 'am.chunk_frames', 'am.kappa',
                   'decoder.order', 'decoder.beam')
    check_non_negative(config, 'features.left_context', 'corpus.heldout_count',
                       'corpus.augment_copies', 'gmm.rounds', 'am.realign_rounds')
    # Fractions #
    for section, leaf in (('gmm', 'subset_fraction'), ('analysis', 'threshold')):
        value = config[section][leaf]
        if not isinstance(value, (int, float)) or not 0.0 < value <= 1.0:
            msg = "'%s.%s' must be in (0, 1], got %r."
            raise ConfigError(msg % (section, leaf, value))
    # Noise #
    corpus = config['corpus']
    if not corpus['snr_low'] <= corpus['snr_mean'] <= corpus['snr_high']:
        msg = "The SNR bounds must satisfy low <= mean <= high, got %s <= %s <= %s."
        raise ConfigError(msg % (corpus['snr_low'], corpus['snr_mean'], corpus['snr_high']))
    if corpus['augment_copies'] > 0 and not config['paths']['noise_bank']:
        raise ConfigError("'corpus.augment_copies' is set but 'paths.noise_bank' is not.")
    # Enumerations #
    check_choice(config, 'am.states', (1, 3))
    check_choice(config, 'decoder.model', ('am', 'realign'))
    check_choice(config, 'analysis.alignments', ('gmm', 'realign'))
    check_choice(config, 'synthetic.g2p', G2P_MODES)
    unknown = set(config['lexicon']['exclusions']) - set(EXCLUSION_CLASSES)
    if unknown:
        msg = "Unknown exclusion classes %s, known ones are %s."
        raise ConfigError(msg % (sorted(unknown), sorted(EXCLUSION_CLASSES)))
    return config

###############################################################################
class Combination(object):
    """
    The merged configuration of one pipeline run together with its runner.
    `overrides` maps dotted keys to values, strings being parsed as YAML.
    """

    def __init__(self, yaml_path=None, overrides=None, short_name=None):
        self.yaml_path = None if yaml_path is None else Path(yaml_path)
        self.overrides = dict(overrides or {})
        if short_name is None:
            short_name = self.yaml_path.stem if self.yaml_path else 'default'
        self.short_name = short_name

    @classmethod
    def from_name(cls, name, overrides=None):
        return cls(find_combo(name), overrides)

    def __repr__(self):
        return '%s object "%s"' % (self.__class__, self.short_name)

    def __getitem__(self, section):
        return self.config[section]

    @cached_property
    def config(self) -> dict:
        """Defaults, then the YAML file, then the overrides, validated."""
        user = {}
        if self.yaml_path is not None:
            if not self.yaml_path.is_file():
                raise ConfigError("No configuration file at '%s'." % self.yaml_path)
            with open(self.yaml_path, 'r', encoding='utf-8') as handle:
                try: user = yaml.safe_load(handle) or {}
                except yaml.YAMLError as error:
                    raise ConfigError("Cannot parse '%s': %s" % (self.yaml_path, error))
            if not isinstance(user, dict):
                raise ConfigError("The file '%s' does not hold a mapping." % self.yaml_path)
        config = merge(load_defaults(), user)
        for dotted, value in self.overrides.items():
            set_dotted(config, dotted, parse_value(value))
        return validate(config)

    @property
    def hash(self):
        """SHA-256 of the canonical JSON of the merged configuration."""
        text = simplejson.dumps(self.config, sort_keys=True)
        return hashlib.sha256(text.encode('utf-8')).hexdigest()

    @property
    def seed(self): return self.config['seed']

    @property
    def workers(self): return self.config['workers']

    @property
    def work_dir(self):
        """Where every artifact of this combo is written."""
        chosen = self.config['paths']['work_dir']
        if chosen: return self.resolve(chosen)
        return graphalign_data_pathlib / 'work' / self.short_name

    #---------------------------- Compositions -------------------------------#
    @property_cached
    def runner(self):
        from graphalign.core.runner import Runner
        return Runner(self)

    #------------------------------- Methods ---------------------------------#
    def resolve(self, path):
        """Relative paths in a combo file are relative to that file."""
        if path is None: return None
        path = Path(path).expanduser()
        if path.is_absolute() or self.yaml_path is None: return path
        return self.yaml_path.parent / path
