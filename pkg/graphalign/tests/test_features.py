#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Run with pytest from the root of the repository:

    cd graphalign && pytest tests/test_features.py
"""

# Third party modules #
import numpy
import pytest

# Internal modules #
from graphalign.core.errors import DataError, NumericalError
from graphalign.corpus import AudioSegment
from graphalign.features import FeatureMatrix, log_mel, plp_with_deltas
from graphalign.features import compute_deltas, stack_downsample, majority_vote
from graphalign.features.mel import ENERGY_FLOOR

###############################################################################
def noise_segment(seconds=1.0, scale=0.1, seed=0):
    rng = numpy.random.default_rng(seed)
    samples = scale * rng.standard_normal(int(16000 * seconds))
    return AudioSegment(samples, 16000, "", "noise")

def mel_matrix(n_frames, dims=80, seed=0):
    rng = numpy.random.default_rng(seed)
    return FeatureMatrix(rng.standard_normal((n_frames, dims)), 10.0, 25.0, 'log-mel')

###############################################################################
def test_one_second_gives_98_frames():
    fm = log_mel(noise_segment())
    assert fm.n_frames == 98
    assert fm.dims == 80
    assert fm.frame_shift_ms == 10.0
    assert fm.kind == 'log-mel'

def test_silence_is_floored():
    segment = AudioSegment(numpy.zeros(16000), 16000, "", "silence")
    fm = log_mel(segment)
    numpy.testing.assert_array_equal(fm.values, numpy.log(ENERGY_FLOOR))

def test_doubling_amplitude_adds_log_four():
    quiet = log_mel(noise_segment(scale=0.1))
    loud  = log_mel(noise_segment(scale=0.2))
    numpy.testing.assert_allclose(loud.values - quiet.values, numpy.log(4.0), atol=1e-6)

def test_delay_by_one_shift_delays_the_frames():
    segment = noise_segment()
    delayed = segment.replace(samples=numpy.concatenate([numpy.zeros(160), segment.samples]))
    original, shifted = log_mel(segment), log_mel(delayed)
    assert shifted.n_frames == original.n_frames + 1
    numpy.testing.assert_allclose(shifted.values[1:], original.values, atol=1e-8)

def test_shorter_than_window():
    segment = AudioSegment(numpy.ones(100), 16000, "", "short")
    with pytest.raises(DataError) as excinfo:
        log_mel(segment)
    assert "shorter than one 400 sample window" in str(excinfo.value)

def test_random_audio_gives_finite_features():
    for seed in range(5):
        rng = numpy.random.default_rng(seed)
        samples = rng.uniform(-1, 1, size=rng.integers(400, 8000))
        segment = AudioSegment(samples, 16000, "", "fuzz")
        assert numpy.all(numpy.isfinite(log_mel(segment).values))
        assert numpy.all(numpy.isfinite(plp_with_deltas(segment).values))

###############################################################################
def test_plp_shape():
    segment = noise_segment()
    plp = plp_with_deltas(segment)
    assert plp.dims == 39
    assert plp.n_frames == log_mel(segment).n_frames
    assert plp.kind == 'plp'

def test_deltas_of_constant_are_zero():
    values = numpy.tile(numpy.arange(13.0), (20, 1))
    numpy.testing.assert_array_equal(compute_deltas(values), 0.0)

def test_deltas_of_ramp_are_one():
    ramp = numpy.arange(20.0)[:, None] * numpy.ones((1, 13))
    deltas = compute_deltas(ramp)
    # The edges are replicated, only the interior sees the full window #
    numpy.testing.assert_allclose(deltas[2:-2], 1.0)

###############################################################################
def test_stacking_dimensions():
    stacked = stack_downsample(mel_matrix(98))
    assert stacked.dims == 640
    assert stacked.n_frames == 33
    assert stacked.frame_shift_ms == 30.0
    assert stacked.kind == 'stacked'

def test_stacking_last_slot_is_current_frame():
    fm = mel_matrix(98)
    stacked = stack_downsample(fm)
    for t in range(stacked.n_frames):
        numpy.testing.assert_array_equal(stacked.values[t, -80:], fm.values[3 * t])

def test_stacking_single_frame_replicates():
    fm = mel_matrix(1)
    stacked = stack_downsample(fm)
    assert stacked.n_frames == 1
    slots = stacked.values.reshape(8, 80)
    for slot in slots:
        numpy.testing.assert_array_equal(slot, fm.values[0])

def test_stacking_rejects_other_kinds():
    plp = FeatureMatrix(numpy.zeros((10, 39)), 10.0, 25.0, 'plp')
    with pytest.raises(DataError) as excinfo:
        stack_downsample(plp)
    assert "Only log-mel features are stacked" in str(excinfo.value)

def test_majority_vote():
    assert majority_vote(['a', 'a', 'b', 'b', 'b', 'c', 'c']) == ['a', 'b', 'c']
    # A three way tie keeps the first label of the bucket #
    assert majority_vote(['x', 'y', 'z']) == ['x']

###############################################################################
def test_matrix_rejects_non_finite():
    values = numpy.zeros((3, 2))
    values[1, 1] = numpy.nan
    with pytest.raises(NumericalError):
        FeatureMatrix(values, 10.0, 25.0, 'log-mel')

def test_matrix_rejects_unknown_kind():
    with pytest.raises(DataError) as excinfo:
        FeatureMatrix(numpy.zeros((3, 2)), 10.0, 25.0, 'mfcc')
    assert "Unknown feature kind" in str(excinfo.value)

def test_container(tmp_path):
    fm = mel_matrix(12, dims=5)
    path = fm.save(tmp_path / 'sub' / 'utt.gafm')
    loaded = FeatureMatrix.load(path)
    assert loaded.kind == 'log-mel'
    assert loaded.frame_shift_ms == 10.0
    assert loaded.window_ms == 25.0
    numpy.testing.assert_allclose(loaded.values, fm.values, rtol=1e-6)

def test_container_truncated(tmp_path):
    path = mel_matrix(12, dims=5).save(tmp_path / 'utt.gafm')
    path.write_bytes(path.read_bytes()[:-4])
    with pytest.raises(DataError) as excinfo:
        FeatureMatrix.load(path)
    assert "truncated" in str(excinfo.value)
