#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Run with pytest from the root of the repository:

    cd graphalign && pytest tests/test_synthetic.py
"""

# Third party modules #
import numpy
import pandas
import pytest

# Internal modules #
from graphalign import SPACE, SIL
from graphalign.analysis import confusion_matrix, agreement_score
from graphalign.core.errors import ConfigError
from graphalign.corpus.audio import load_dataset, read_manifest
from graphalign.corpus.synthetic import SyntheticSpec, generate_synthetic, frame_labels
from graphalign.hmm_gmm import read_alignments

###############################################################################
def small_spec(**kwargs):
    fields = dict(n_graphemes=5, vocabulary_size=15, n_utterances=12)
    fields.update(kwargs)
    return SyntheticSpec(**fields)

def targets_of(transcript):
    symbols = [SIL]
    for num, word in enumerate(transcript.split()):
        if num > 0: symbols.append(SPACE)
        symbols.extend(word)
    return symbols + [SIL]

###############################################################################
def test_three_tokens_of_300_ms():
    segments = [('a', 0.0, 300.0, 'A', 0),
                ('b', 300.0, 600.0, 'B', 0),
                ('c', 600.0, 900.0, 'C', 0)]
    # 900 ms at 16 kHz with a 25 ms window and a 10 ms shift #
    n_frames = 1 + (14400 - 400) // 160
    owner, states = frame_labels(segments, n_frames, SyntheticSpec())
    assert n_frames == 88
    assert numpy.bincount(owner).tolist() == [29, 30, 29]
    assert states[:29].tolist() == [0] * 10 + [1] * 10 + [2] * 9

def test_spec_defaults():
    spec = SyntheticSpec()
    assert spec.graphemes == tuple('abcdefghij')
    assert spec.phonemes == tuple('ABCDEFGHIJ')
    assert spec.carrier_frequencies[:2] == (250.0, 550.0)

def test_phoneme_counts_per_mode():
    assert SyntheticSpec(g2p='many_to_one').n_phonemes == 5
    assert SyntheticSpec(g2p='one_to_many').n_phonemes == 20
    options = SyntheticSpec(g2p='one_to_many').realisations()
    assert options['a'] == ('A',)
    assert options['b'] == ('B', 'K', 'L')
    assert options['d'] == ('D', 'M', 'N')

def test_duplicate_carriers():
    with pytest.raises(ConfigError) as excinfo:
        SyntheticSpec(n_graphemes=3, carriers=(300.0, 500.0, 300.0))
    assert "must be distinct" in str(excinfo.value)

def test_tokens_shorter_than_a_window():
    with pytest.raises(ConfigError) as excinfo:
        SyntheticSpec(token_ms=30.0, jitter_ms=10.0)
    assert "analysis window" in str(excinfo.value)

def test_other_invalid_specs():
    with pytest.raises(ConfigError):
        SyntheticSpec(g2p='shuffled')
    with pytest.raises(ConfigError):
        SyntheticSpec(n_graphemes=27)
    with pytest.raises(ConfigError):
        SyntheticSpec(carriers=tuple(1000.0 * (i + 1) for i in range(10)))
    with pytest.raises(ConfigError) as excinfo:
        SyntheticSpec(n_graphemes=2, vocabulary_size=100, max_word_length=3)
    assert "Cannot draw 100 distinct words" in str(excinfo.value)

###############################################################################
def test_files_written(tmp_path):
    corpus = generate_synthetic(small_spec(), tmp_path, seed=1)
    dataset = load_dataset(corpus.manifest_path)
    assert len(dataset) == 12
    assert dataset[0].sample_rate == 16000
    assert dataset[0].id == 'utt00000'
    g2p = pandas.read_csv(tmp_path / 'g2p.csv')
    assert g2p['phonemes'].tolist() == ['A', 'B', 'C', 'D', 'E']
    assert read_alignments(tmp_path / 'graphemes.ali') == corpus.grapheme_alignments

def test_alignments_spell_the_transcripts(tmp_path):
    corpus = generate_synthetic(small_spec(), tmp_path, seed=2)
    rows = read_manifest(corpus.manifest_path)
    for (_, _, transcript), ali in zip(rows, corpus.grapheme_alignments):
        assert ali.validate(targets_of(transcript))

def test_phonemic_transcripts_follow_the_map(tmp_path):
    corpus = generate_synthetic(small_spec(g2p='many_to_one'), tmp_path, seed=3)
    graphemic = read_manifest(corpus.manifest_path)
    phonemic  = read_manifest(corpus.phonemic_manifest_path)
    for (_, _, words), (_, _, sounds) in zip(graphemic, phonemic):
        expected = ' '.join(''.join(corpus.g2p[g][0] for g in w) for w in words.split())
        assert sounds == expected

def test_same_seed_same_bytes(tmp_path):
    spec = small_spec(n_utterances=5)
    generate_synthetic(spec, tmp_path / 'first', seed=7)
    generate_synthetic(spec, tmp_path / 'second', seed=7)
    first = sorted(p.relative_to(tmp_path / 'first')
                   for p in (tmp_path / 'first').rglob('*') if p.is_file())
    assert len(first) == 5 + 5
    for name in first:
        one = (tmp_path / 'first' / name).read_bytes()
        two = (tmp_path / 'second' / name).read_bytes()
        assert one == two

def test_other_seed_other_audio(tmp_path):
    spec = small_spec(n_utterances=2)
    generate_synthetic(spec, tmp_path / 'first', seed=1)
    generate_synthetic(spec, tmp_path / 'second', seed=2)
    one = (tmp_path / 'first' / 'audio' / 'utt00000.wav').read_bytes()
    two = (tmp_path / 'second' / 'audio' / 'utt00000.wav').read_bytes()
    assert one != two

###############################################################################
def test_injective_oracle_agrees_fully(tmp_path):
    corpus = generate_synthetic(small_spec(), tmp_path, seed=4)
    cm = confusion_matrix(corpus.grapheme_alignments, corpus.phoneme_alignments)
    report = agreement_score(cm)
    assert report.score == 1.0
    rows = report.rows
    assert (rows['best_phoneme'] == rows['grapheme'].str.upper()).all()

def test_agreement_decreases_with_ambiguity(tmp_path):
    scores = []
    for mode in ('injective', 'one_to_many', 'noisy'):
        spec = SyntheticSpec(vocabulary_size=30, n_utterances=100, g2p=mode)
        corpus = generate_synthetic(spec, tmp_path / mode, seed=5)
        cm = confusion_matrix(corpus.grapheme_alignments, corpus.phoneme_alignments)
        scores.append(agreement_score(cm).score)
    assert scores[0] > scores[1] > scores[2]
    assert scores[0] == 1.0
    assert scores[2] == 0.0
