#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Command line interface.

    $ graphalign synthesize --out ~/synth --seed 1 --synthetic.g2p noisy
    $ graphalign prep --config ~/synth/combo.yaml
    $ graphalign train-gmm --config ~/synth/combo.yaml --gmm.rounds 2 --workers 4
    $ graphalign all --config ~/synth/combo.yaml

Any configuration value can be changed with a dotted key. The exit code is
0 on success, 1 for usage and configuration errors, 2 for data errors and
3 for numerical failures.
"""

# Built-in modules #
import sys
import argparse
from pathlib import Path

# Third party modules #
import yaml

# Internal modules #
from graphalign import __version__
from graphalign.core.combo import Combination, find_combo
from graphalign.core.errors import ConfigError, exit_code_of
from graphalign.core.runner import STAGES
from graphalign.corpus.synthetic import SyntheticSpec, generate_synthetic

# Constants #
COMMANDS = STAGES + ('all', 'qaqc', 'synthesize')
OWN_OPTIONS = ('--config', '--out', '--verbose', '--version', '--help', '-h')

###############################################################################
class ArgumentParser(argparse.ArgumentParser):
    """Usage errors become configuration errors instead of exiting."""

    def error(self, message):
        raise ConfigError(message)

def make_parser():
    parser = ArgumentParser(prog='graphalign',
                            description="Lexicon-free grapheme acoustic modelling.")
    parser.add_argument('command', choices=COMMANDS, help="Stage or action to run.")
    parser.add_argument('--config', help="Combo YAML file, or the name of a combo.")
    parser.add_argument('--out', help="Output directory of `synthesize`.")
    parser.add_argument('--verbose', action='store_true', help="Log to the console too.")
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    return parser

def split_arguments(argv):
    """
    Separate the options of the parser from the configuration overrides,
    `--gmm.rounds 2` or `--gmm.rounds=2`. Override values are taken as is,
    so negative numbers are accepted.
    """
    own, overrides, tokens = [], {}, list(argv)
    while tokens:
        token = tokens.pop(0)
        name = token.split('=', 1)[0]
        if not token.startswith('--') or name in OWN_OPTIONS:
            own.append(token)
            if name in ('--config', '--out') and '=' not in token and tokens:
                own.append(tokens.pop(0))
            continue
        key = token[2:]
        if '=' in key:
            key, value = key.split('=', 1)
        else:
            if not tokens:
                raise ConfigError("The option '%s' needs a value." % token)
            value = tokens.pop(0)
        overrides[key] = value
    return own, overrides

###############################################################################
def synthetic_spec(config):
    """The corpus generator parameters of a configuration."""
    return SyntheticSpec(window_ms=config['features']['window_ms'],
                         shift_ms=config['features']['shift_ms'],
                         **config['synthetic'])

def synthesize(combo, out_dir):
    """
    Generate a synthetic corpus and write next to it a combo file pointing
    the pipeline at it.
    """
    out_dir = Path(out_dir).expanduser()
    corpus = generate_synthetic(synthetic_spec(combo.config), out_dir, combo.seed)
    combo_path = out_dir / 'combo.yaml'
    content = {'seed': combo.seed,
               'paths': {'manifest':             corpus.manifest_path.name,
                         'phonemic_alignments':  'phonemes.ali',
                         'reference_alignments': 'graphemes.ali',
                         'work_dir':             'work'}}
    with open(combo_path, 'w', encoding='utf-8') as handle:
        yaml.safe_dump(content, handle, default_flow_style=False, sort_keys=True)
    return combo_path

def run(argv=None):
    if argv is None: argv = sys.argv[1:]
    own, overrides = split_arguments(argv)
    args = make_parser().parse_args(own)
    yaml_path = find_combo(args.config) if args.config else None
    combo = Combination(yaml_path, overrides)
    if args.command == 'synthesize':
        if not args.out: raise ConfigError("The command 'synthesize' needs --out.")
        path = synthesize(combo, args.out)
        print("Wrote the synthetic corpus and its combo file '%s'." % path)
        return
    if yaml_path is None:
        raise ConfigError("The command '%s' needs --config." % args.command)
    runner = combo.runner
    runner.verbose = args.verbose
    if   args.command == 'all':  runner.run_all()
    elif args.command == 'qaqc': runner.qaqc()
    else:                        runner.run(args.command)

def main(argv=None):
    """Run the command line and return the process exit code."""
    try:
        run(argv)
    except Exception as error:
        print("graphalign: error: %s" % error, file=sys.stderr)
        return exit_code_of(error)
    return 0
