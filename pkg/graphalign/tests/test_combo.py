#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Run with pytest from the root of the repository:

    cd graphalign && pytest tests/test_combo.py
"""

# Third party modules #
import pytest
import yaml

# Internal modules #
from graphalign.core.combo import Combination, load_defaults, merge, find_combo
from graphalign.core.combo import parse_value, set_dotted, validate
from graphalign.core.errors import ConfigError

###############################################################################
def write_combo(path, content):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(yaml.safe_dump(content), encoding='utf-8')
    return path

def config_error(**overrides):
    """Message of the error raised by the given dotted overrides."""
    with pytest.raises(ConfigError) as excinfo:
        Combination(overrides=overrides).config
    return str(excinfo.value)

###############################################################################
def test_defaults():
    config = load_defaults()
    assert config['features']['n_mels'] == 80
    assert config['features']['window_ms'] == 25.0
    assert config['features']['left_context'] == 7
    assert config['features']['rate_factor'] == 3
    assert config['lexicon']['min_count'] == 10
    assert config['gmm']['mixtures'] == 14
    assert config['decoder']['order'] == 5
    assert config['analysis']['threshold'] == 0.5
    assert validate(config) is config

def test_merge_is_recursive():
    base = {'a': 1, 'b': {'c': 2, 'd': 3}}
    merged = merge(base, {'b': {'d': 4}})
    assert merged == {'a': 1, 'b': {'c': 2, 'd': 4}}
    assert base['b']['d'] == 3

def test_merge_unknown_key():
    with pytest.raises(ConfigError) as excinfo:
        merge({'b': {'c': 2}}, {'b': {'x': 1}})
    assert "Unknown configuration key 'b.x'." in str(excinfo.value)

def test_merge_value_over_section():
    with pytest.raises(ConfigError) as excinfo:
        merge({'b': {'c': 2}}, {'b': 5})
    assert "is a section" in str(excinfo.value)

def test_dotted_keys():
    config = load_defaults()
    set_dotted(config, 'gmm.rounds', 2)
    assert config['gmm']['rounds'] == 2
    for dotted in ('gmm.nope', 'nope.rounds', 'gmm'):
        with pytest.raises(ConfigError):
            set_dotted(config, dotted, 1)

def test_values_are_yaml_scalars():
    assert parse_value('2') == 2
    assert parse_value('-0.5') == -0.5
    assert parse_value('true') is True
    assert parse_value('null') is None
    assert parse_value('[emoji]') == ['emoji']
    assert parse_value('noisy') == 'noisy'

###############################################################################
def test_file_then_overrides(tmp_path):
    path = write_combo(tmp_path / 'run.yaml', {'gmm': {'rounds': 2, 'mixtures': 4}})
    combo = Combination(path, {'gmm.rounds': '3'})
    assert combo.short_name == 'run'
    assert combo['gmm']['mixtures'] == 4
    assert combo['gmm']['rounds'] == 3
    assert combo['gmm']['n_states'] == 3

def test_unknown_key_in_file(tmp_path):
    path = write_combo(tmp_path / 'run.yaml', {'gmm': {'mixturez': 4}})
    with pytest.raises(ConfigError) as excinfo:
        Combination(path).config
    assert "Unknown configuration key 'gmm.mixturez'." in str(excinfo.value)

def test_missing_and_broken_files(tmp_path):
    with pytest.raises(ConfigError) as excinfo:
        Combination(tmp_path / 'missing.yaml').config
    assert "No configuration file at" in str(excinfo.value)
    broken = tmp_path / 'broken.yaml'
    broken.write_text("gmm: [1, 2\n", encoding='utf-8')
    with pytest.raises(ConfigError) as excinfo:
        Combination(broken).config
    assert "Cannot parse" in str(excinfo.value)
    listing = tmp_path / 'list.yaml'
    listing.write_text("- 1\n- 2\n", encoding='utf-8')
    with pytest.raises(ConfigError) as excinfo:
        Combination(listing).config
    assert "does not hold a mapping" in str(excinfo.value)

def test_empty_file_means_defaults(tmp_path):
    empty = tmp_path / 'empty.yaml'
    empty.write_text("", encoding='utf-8')
    assert Combination(empty).config == load_defaults()

###############################################################################
def test_invalid_values():
    assert config_error(workers=0) == "'workers' must be at least 1."
    assert config_error(seed='1.5') == "'seed' must be an integer, got 1.5."
    assert "'am.hidden' must be a positive number" in config_error(**{'am.hidden': -1})
    assert "'gmm.rounds' must be a non-negative integer" in config_error(**{'gmm.rounds': -1})
    msg = config_error(**{'gmm.subset_fraction': 0})
    assert msg == "'gmm.subset_fraction' must be in (0, 1], got 0."
    assert "'analysis.threshold'" in config_error(**{'analysis.threshold': 1.5})
    assert "'am.states' must be one of [1, 3]" in config_error(**{'am.states': 2})
    assert "'synthetic.g2p'" in config_error(**{'synthetic.g2p': 'shuffled'})

def test_noise_settings():
    msg = config_error(**{'corpus.augment_copies': 2})
    assert msg == "'corpus.augment_copies' is set but 'paths.noise_bank' is not."
    assert "low <= mean <= high" in config_error(**{'corpus.snr_mean': 40})

def test_unknown_exclusion_class():
    msg = config_error(**{'lexicon.exclusions': '[emoji, vowels]'})
    assert msg.startswith("Unknown exclusion classes ['vowels']")

###############################################################################
def test_hash_is_stable(tmp_path):
    first  = write_combo(tmp_path / 'a.yaml', {'seed': 3, 'gmm': {'rounds': 2}})
    second = tmp_path / 'b.yaml'
    second.write_text("gmm:\n  rounds: 2\nseed: 3\n", encoding='utf-8')
    assert Combination(first).hash == Combination(second).hash
    assert len(Combination(first).hash) == 64
    assert Combination(first, {'seed': 4}).hash != Combination(first).hash

def test_relative_paths_follow_the_file(tmp_path):
    path = write_combo(tmp_path / 'runs' / 'run.yaml',
                       {'paths': {'manifest': 'corpus/manifest.tsv', 'work_dir': 'work'}})
    combo = Combination(path)
    assert combo.work_dir == tmp_path / 'runs' / 'work'
    assert combo.resolve('corpus/manifest.tsv') == tmp_path / 'runs' / 'corpus' / 'manifest.tsv'
    assert combo.resolve(str(tmp_path / 'abs.tsv')) == tmp_path / 'abs.tsv'
    assert combo.resolve(None) is None

def test_find_combo(tmp_path):
    path = write_combo(tmp_path / 'run.yaml', {})
    assert find_combo(str(path)) == path
    with pytest.raises(ConfigError) as excinfo:
        find_combo('no_such_combo_name')
    assert "no combo of that name" in str(excinfo.value)
