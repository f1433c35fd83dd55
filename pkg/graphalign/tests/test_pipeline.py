#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
End to end runs of the pipeline on synthetic corpora. These take minutes,
deselect them with:

    cd graphalign && pytest -m "not slow"
"""

# Built-in modules #
import shutil
from pathlib import Path

# Third party modules #
import pandas
import pytest
import simplejson

# Internal modules #
from graphalign.analysis import alignment_accuracy
from graphalign.core.cli import synthesize
from graphalign.core.combo import Combination
from graphalign.core.errors import MissingArtifactError
from graphalign.core.manifest import artifact_digests
from graphalign.core.runner import STAGES
from graphalign.hmm_gmm import read_alignments

# Constants #
SMALL = {'corpus.heldout_count': 8, 'gmm.mixtures': 2, 'gmm.rounds': 1,
         'gmm.subset_fraction': 0.5, 'am.hidden': 16, 'am.epochs': 2,
         'decoder.order': 3, 'decoder.beam': 30}

###############################################################################
def make_corpus(directory, **synthetic):
    overrides = {'synthetic.' + k: v for k, v in synthetic.items()}
    return synthesize(Combination(overrides=overrides), directory)

def read_json(path):
    with open(str(path), 'r', encoding='utf-8') as handle:
        return simplejson.load(handle)

def corpus_wer(runner):
    model = runner.combo['decoder']['model']
    df = pandas.read_csv(str(runner.score.paths[model + '_corpus']))
    return float(df.loc[0, 'translit_wer'])

@pytest.fixture(scope='module')
def small_run(tmp_path_factory):
    """Every stage once on a corpus of 40 utterances and five graphemes."""
    directory = tmp_path_factory.mktemp('small')
    combo_path = make_corpus(directory, n_graphemes=5, n_utterances=40,
                             vocabulary_size=12)
    runner = Combination(combo_path, SMALL).runner
    runner.run_all()
    return runner

###############################################################################
@pytest.mark.slow
def test_every_artifact_is_written(small_run):
    qaqc = small_run.qaqc
    assert qaqc.artifacts['exists'].all()
    for stage in STAGES:
        manifest = read_json(small_run.paths.manifest_dir + stage + '.json')
        assert manifest['stage'] == stage
        assert manifest['config_hash'] == small_run.combo.hash
        assert manifest['outputs']
    report = read_json(small_run.prep.paths.report)
    assert report['loaded'] == 40
    dropped = len(report['dropped_train']) + len(report['dropped_heldout'])
    assert report['heldout'] + report['train'] + len(report['too_short']) + dropped == 40

@pytest.mark.slow
def test_quality_checks_pass(small_run):
    summary = small_run.qaqc()
    assert summary['model'] is True
    assert summary['gmm'] is True
    assert summary['realign'] is True

@pytest.mark.slow
def test_rerun_gives_identical_artifacts(small_run):
    manifest_path = small_run.paths.manifest_dir + 'train-gmm.json'
    before = read_json(manifest_path)
    small_run.run('train-gmm')
    assert read_json(manifest_path) == before

@pytest.mark.slow
def test_deleting_downstream_keeps_upstream(small_run):
    manifest_path = small_run.paths.manifest_dir + 'prep.json'
    before = read_json(manifest_path)
    shutil.rmtree(small_run.data_dir + 'decode')
    small_run.run('prep')
    assert read_json(manifest_path) == before

@pytest.mark.slow
def test_stage_before_its_producer(tmp_path):
    combo_path = make_corpus(tmp_path, n_graphemes=3, n_utterances=12,
                             vocabulary_size=6)
    runner = Combination(combo_path, dict(SMALL, **{'corpus.heldout_count': 2})).runner
    with pytest.raises(MissingArtifactError) as excinfo:
        runner.run('align')
    assert excinfo.value.stage == 'prep'
    runner.run('prep')
    with pytest.raises(MissingArtifactError) as excinfo:
        runner.run('align')
    assert excinfo.value.stage == 'train-gmm'
    assert "model.gahg" in str(excinfo.value)

###############################################################################
@pytest.fixture(scope='module')
def full_run(tmp_path_factory):
    """Ten graphemes, fifty words and five hundred utterances, default settings."""
    directory = tmp_path_factory.mktemp('full')
    combo_path = make_corpus(directory, n_graphemes=10, vocabulary_size=50,
                             n_utterances=500)
    runner = Combination(combo_path, {'corpus.heldout_count': 100}).runner
    runner.run_all()
    return runner

@pytest.mark.slow
def test_full_synthetic_recognition(full_run):
    assert corpus_wer(full_run) < 0.05

@pytest.mark.slow
def test_full_synthetic_gmm_alignments(full_run):
    combo = full_run.combo
    truth = read_alignments(combo.resolve(combo['paths']['reference_alignments']))
    gmm = read_alignments(full_run.align.paths.gmm)
    assert alignment_accuracy(gmm, truth) > 0.90

@pytest.mark.slow
def test_full_synthetic_neural_alignments(full_run):
    accuracy = read_json(full_run.analyze.paths.accuracy)['alignment_accuracy']
    assert accuracy > 0.90

@pytest.mark.slow
def test_realignment_does_not_hurt_recognition(full_run):
    # The first neural model decoded and scored next to the retrained one #
    first = Combination(full_run.combo.yaml_path, {'corpus.heldout_count': 100,
                                                   'decoder.model': 'am'}).runner
    first.run('decode')
    first.run('score')
    assert corpus_wer(full_run) <= corpus_wer(first) + 0.005

@pytest.mark.slow
def test_two_runs_give_identical_artifacts(tmp_path):
    overrides = dict(SMALL, **{'workers': 2, 'corpus.heldout_count': 4})
    digests = []
    for name in ('first', 'second'):
        combo_path = make_corpus(tmp_path / name, n_graphemes=4, n_utterances=20,
                                 vocabulary_size=8)
        runner = Combination(combo_path, overrides).runner
        runner.run_all()
        work = Path(runner.data_dir)
        found = artifact_digests([work], work)
        digests.append({k: v for k, v in found.items() if not k.startswith('logs/')})
    assert 'gmm/model.gahg' in digests[0]
    assert 'realign/model.gaam' in digests[0]
    assert 'manifest/analyze.json' in digests[0]
    assert digests[0] == digests[1]

@pytest.mark.slow
def test_agreement_and_wer_follow_ambiguity(tmp_path):
    scores, wers = [], []
    for mode in ('injective', 'one_to_many', 'noisy'):
        combo_path = make_corpus(tmp_path / mode, vocabulary_size=30,
                                 n_utterances=200, g2p=mode)
        runner = Combination(combo_path, {'corpus.heldout_count': 40,
                                          'am.epochs': 6}).runner
        runner.run_all()
        scores.append(read_json(runner.analyze.paths.agreement)['score'])
        wers.append(corpus_wer(runner))
    assert scores[0] > scores[1] > scores[2]
    assert wers[0] <= wers[1] + 0.005
    assert wers[1] <= wers[2] + 0.005
