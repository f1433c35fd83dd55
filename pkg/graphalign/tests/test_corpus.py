"""
Test dataset ingestion and noise augmentation.

Execute the test suite from bash with py.test as follows:

    cd ~/repos/graphalign/graphalign
    pytest

"""

import numpy as np
import pytest

from graphalign.core.errors import ConfigError, DataError
from graphalign.corpus.audio import AudioSegment, load_dataset, load_noise_bank
from graphalign.corpus.audio import normalize_transcript, write_manifest, write_wav
from graphalign.corpus.noise import NoiseProfile, augment_dataset, augment_noise
from graphalign.corpus.noise import measure_snr, mix_at_snr, sample_snr, signal_power

def tone(seconds=1.0, rate=16000, freq=440.0, amplitude=0.3):
    t = np.arange(int(seconds * rate)) / rate
    return amplitude * np.sin(2 * np.pi * freq * t)

def make_corpus(tmp_path, transcripts, rate=16000):
    rows = []
    for num, text in enumerate(transcripts):
        path = tmp_path / ("utt%i.wav" % num)
        write_wav(path, tone(0.5, rate, 300 + 100 * num), rate)
        rows.append((path, text))
    manifest = tmp_path / "manifest.tsv"
    write_manifest(manifest, rows)
    return manifest

def test_three_lines_in_manifest_order(tmp_path):
    manifest = make_corpus(tmp_path, ["one", "two words", "three"])
    dataset = load_dataset(manifest)
    assert [s.id for s in dataset] == ["utt0", "utt1", "utt2"]
    assert [s.transcript for s in dataset] == ["one", "two words", "three"]

def test_missing_file_names_the_line(tmp_path):
    write_wav(tmp_path / "ok.wav", tone(), 16000)
    manifest = tmp_path / "manifest.tsv"
    manifest.write_text("ok.wav\thello\nmissing.wav\tworld\n", encoding='utf-8')
    with pytest.raises(DataError) as excinfo:
        load_dataset(manifest)
    assert "Line 2" in str(excinfo.value)

def test_one_second_at_16khz(tmp_path):
    write_wav(tmp_path / "a.wav", tone(1.0), 16000)
    (tmp_path / "m.tsv").write_text("a.wav\thello\n", encoding='utf-8')
    segment, = load_dataset(tmp_path / "m.tsv")
    assert len(segment.samples) == 16000
    assert segment.sample_rate == 16000
    assert segment.duration == pytest.approx(1.0)

def test_empty_transcript_is_skipped(tmp_path):
    manifest = make_corpus(tmp_path, ["hello", "   ", "world"])
    with pytest.warns(UserWarning, match="empty transcript"):
        dataset = load_dataset(manifest)
    assert [s.transcript for s in dataset] == ["hello", "world"]

def test_unsupported_encoding(tmp_path):
    import soundfile
    soundfile.write(str(tmp_path / "a.wav"), tone(), 16000, subtype='FLOAT')
    (tmp_path / "m.tsv").write_text("a.wav\thello\n", encoding='utf-8')
    with pytest.raises(DataError) as excinfo:
        load_dataset(tmp_path / "m.tsv")
    assert "Line 1" in str(excinfo.value)

def test_load_is_deterministic(tmp_path):
    manifest = make_corpus(tmp_path, ["a b", "c d", "e"])
    assert load_dataset(manifest) == load_dataset(manifest)

def test_stereo_is_averaged(tmp_path):
    import soundfile
    stereo = np.stack([tone(0.1), np.zeros(1600)], axis=1)
    soundfile.write(str(tmp_path / "s.wav"), stereo, 16000, subtype='PCM_16')
    (tmp_path / "m.tsv").write_text("s.wav\thello\n", encoding='utf-8')
    segment, = load_dataset(tmp_path / "m.tsv")
    assert segment.samples.ndim == 1
    assert np.max(np.abs(segment.samples)) == pytest.approx(0.15, abs=2e-3)

def test_transcripts_are_normalized():
    decomposed = "cafe\u0301\tdu  jour"
    assert normalize_transcript(decomposed) == "caf\u00e9 du jour"

def test_segment_invariants():
    with pytest.raises(DataError):
        AudioSegment(np.zeros(0), 16000, "a", "x")
    with pytest.raises(DataError):
        AudioSegment(np.zeros(10), 0, "a", "x")
    with pytest.raises(DataError):
        AudioSegment(np.zeros(10), 16000, "a\x07b", "x")

###############################################################################
def test_default_profile_is_beta_2_3():
    profile = NoiseProfile(noise_bank=())
    a, b = profile.beta_parameters
    assert (a, b) == pytest.approx((2.0, 3.0))
    assert 30 * a / (a + b) == pytest.approx(12.0)

def test_snr_draws():
    rng = np.random.default_rng(1)
    profile = NoiseProfile(noise_bank=())
    draws = np.array([sample_snr(rng, profile) for _ in range(100000)])
    assert abs(draws.mean() - 12.0) < 0.2
    assert draws.min() >= 0.0 and draws.max() <= 30.0

def test_snr_ten_thousand_draws():
    rng = np.random.default_rng(7)
    profile = NoiseProfile(noise_bank=())
    draws = np.array([sample_snr(rng, profile) for _ in range(10000)])
    assert abs(draws.mean() - 12.0) < 0.2
    assert np.all((draws >= 0) & (draws <= 30))

def test_degenerate_interval():
    rng = np.random.default_rng(0)
    profile = NoiseProfile(noise_bank=(), snr_low=10, snr_high=10, snr_mean=10)
    assert {sample_snr(rng, profile) for _ in range(50)} == {10.0}

def test_unordered_bounds():
    with pytest.raises(ConfigError):
        NoiseProfile(noise_bank=(), snr_low=20, snr_high=30, snr_mean=12)

def test_zero_db_means_equal_power():
    rng = np.random.default_rng(0)
    _, signal, noise = mix_at_snr(0.1 * rng.standard_normal(8000),
                                  rng.standard_normal(8000), 0.0)
    assert signal_power(signal) / signal_power(noise) == pytest.approx(1.0, abs=1e-6)

def test_thirty_db_ratio():
    rng = np.random.default_rng(0)
    _, signal, noise = mix_at_snr(tone(0.5), rng.standard_normal(8000), 30.0)
    assert signal_power(signal) / signal_power(noise) == pytest.approx(1000.0, rel=1e-3)

@pytest.mark.parametrize("target", [0.0, 6.0, 12.0, 24.0, 30.0])
def test_white_noise_mixing_hits_target(target):
    rng = np.random.default_rng(3)
    signal = 0.2 * rng.standard_normal(16000)
    noise = 0.5 * rng.standard_normal(16000)
    _, kept_signal, kept_noise = mix_at_snr(signal, noise, target)
    assert abs(measure_snr(kept_signal, kept_noise) - target) < 0.01

def test_clipping_rescales_both_components():
    rng = np.random.default_rng(3)
    mixed, signal, noise = mix_at_snr(0.9 * np.sign(tone(0.1)), rng.standard_normal(1600), 0.0)
    assert np.max(np.abs(mixed)) == pytest.approx(1.0)
    assert measure_snr(signal, noise) == pytest.approx(0.0, abs=0.01)

def test_short_noise_is_tiled():
    rng = np.random.default_rng(3)
    signal = tone(1.0)
    noise = rng.standard_normal(1000)
    mixed, _, kept_noise = mix_at_snr(signal, noise, 12.0)
    assert len(mixed) == len(signal)
    np.testing.assert_allclose(kept_noise[:1000], kept_noise[1000:2000])

def test_zero_power_is_an_error():
    noise = AudioSegment(np.ones(100), 16000, '', 'n')
    silent = AudioSegment(np.zeros(100), 16000, 'a', 's')
    with pytest.raises(DataError):
        augment_noise(silent, noise, 10.0)

def test_augment_noise_keeps_the_identity():
    rng = np.random.default_rng(0)
    segment = AudioSegment(tone(0.2), 16000, 'hello', 'u1')
    noise = AudioSegment(rng.standard_normal(800), 16000, '', 'n')
    noisy = augment_noise(segment, noise, 12.0)
    assert noisy.id == 'u1' and noisy.transcript == 'hello'
    assert len(noisy) == len(segment)
    assert not np.array_equal(noisy.samples, segment.samples)

def test_augment_dataset_copies(tmp_path):
    rng = np.random.default_rng(0)
    for name in ('babble', 'car'):
        write_wav(tmp_path / (name + '.wav'), 0.2 * rng.standard_normal(4000), 16000)
    bank = load_noise_bank(tmp_path)
    assert [n.id for n in bank] == ['babble', 'car']
    profile = NoiseProfile(bank)
    dataset = [AudioSegment(tone(0.2, freq=f), 16000, 'w', 'u%i' % i)
               for i, f in enumerate((200, 300))]
    result = augment_dataset(dataset, profile, 2, seed=5)
    assert [s.id for s in result] == ['u0', 'u0_noise0', 'u0_noise1',
                                      'u1', 'u1_noise0', 'u1_noise1']
    assert result == augment_dataset(dataset, profile, 2, seed=5)
    assert augment_dataset(dataset, profile, 0, seed=5) == dataset

def test_augmentation_needs_noise():
    dataset = [AudioSegment(tone(0.2), 16000, 'w', 'u')]
    with pytest.raises(ConfigError):
        augment_dataset(dataset, NoiseProfile(()), 1, seed=0)
