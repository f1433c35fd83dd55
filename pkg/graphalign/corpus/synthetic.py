#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Synthetic corpora with exactly known alignments.

Every phoneme is rendered as a sinusoidal token at its own carrier
frequency. Graphemes are realised as phonemes through a configurable
grapheme to phoneme mapping:

* `injective`    each grapheme has its own phoneme.
* `many_to_one`  graphemes are paired onto a shared phoneme.
* `one_to_many`  every second grapheme is realised by one of `fanout`
                 phonemes picked at random on each occurrence.
* `noisy`        each occurrence is realised as a random other phoneme
                 with probability `noise_rate`.

Utterances start and end with `<sil>` (low level noise only) and words are
separated by shorter silent gaps, the `<space>` symbol. The generator writes
the grapheme manifest, a phonemic manifest of the same audio (one character
per phoneme) and the ground truth frame alignments of both.

    >>> from graphalign.corpus.synthetic import SyntheticSpec, generate_synthetic
    >>> corpus = generate_synthetic(SyntheticSpec(n_utterances=20), "/tmp/synth", seed=1)
    >>> corpus.manifest_path
"""

# Built-in modules #
from dataclasses import dataclass
from pathlib import Path

# Third party modules #
import numpy
import pandas

# Internal modules #
from graphalign import SPACE, SIL
from graphalign.core.errors import ConfigError
from graphalign.corpus.audio import write_manifest, write_wav
from graphalign.features.framing import frame_count, ms_to_samples
from graphalign.hmm_gmm.alignment import FrameAlignment, write_alignments

# Constants #
G2P_MODES = ('injective', 'many_to_one', 'one_to_many', 'noisy')
GRAPHEME_CHARS = 'abcdefghijklmnopqrstuvwxyz'
PHONEME_CHARS  = 'ABCDEFGHIJKLMNOPQRSTUVWXYZ'

###############################################################################
@dataclass(frozen=True)
class SyntheticSpec:
    """Everything that defines a synthetic corpus, apart from the seed."""

    n_graphemes:     int   = 10
    vocabulary_size: int   = 50
    n_utterances:    int   = 500
    min_words:       int   = 1
    max_words:       int   = 4
    min_word_length: int   = 2
    max_word_length: int   = 5
    sample_rate:     int   = 16000
    token_ms:        float = 150.0
    jitter_ms:       float = 20.0
    gap_ms:          float = 90.0
    sil_ms:          float = 150.0
    fade_ms:         float = 5.0
    amplitude:       float = 0.5
    noise_level:     float = 0.005
    g2p:             str   = 'injective'
    fanout:          int   = 3
    noise_rate:      float = 0.7
    carrier_base_hz: float = 250.0
    carrier_step_hz: float = 300.0
    carriers:        tuple = None
    window_ms:       float = 25.0
    shift_ms:        float = 10.0

    def __post_init__(self):
        if self.g2p not in G2P_MODES:
            raise ConfigError("Unknown g2p mode '%s', expected one of %s." % (self.g2p, G2P_MODES))
        if not 1 <= self.n_graphemes <= len(GRAPHEME_CHARS):
            raise ConfigError("The grapheme count must be between 1 and 26.")
        if self.n_phonemes > len(PHONEME_CHARS):
            raise ConfigError("The g2p mode needs %i phonemes, at most 26 are supported." % self.n_phonemes)
        if self.token_ms - self.jitter_ms < self.window_ms:
            raise ConfigError("Token durations must be at least one analysis window long.")
        carriers = self.carrier_frequencies
        if len(set(carriers)) != len(carriers):
            raise ConfigError("The carrier frequencies must be distinct, got %s." % list(carriers))
        if max(carriers) >= self.sample_rate / 2:
            raise ConfigError("Carrier %g Hz is above the Nyquist frequency." % max(carriers))
        if self.vocabulary_size > self.max_vocabulary:
            raise ConfigError("Cannot draw %i distinct words." % self.vocabulary_size)

    #----------------------------- Properties --------------------------------#
    @property
    def graphemes(self): return tuple(GRAPHEME_CHARS[:self.n_graphemes])

    @property
    def n_phonemes(self):
        if self.g2p == 'many_to_one': return (self.n_graphemes + 1) // 2
        if self.g2p == 'one_to_many':
            return self.n_graphemes + (self.n_graphemes // 2) * (self.fanout - 1)
        return self.n_graphemes

    @property
    def phonemes(self): return tuple(PHONEME_CHARS[:self.n_phonemes])

    @property
    def carrier_frequencies(self):
        if self.carriers is not None: return tuple(self.carriers)
        return tuple(self.carrier_base_hz + i * self.carrier_step_hz
                     for i in range(self.n_phonemes))

    @property
    def max_vocabulary(self):
        lengths = range(self.min_word_length, self.max_word_length + 1)
        return sum(self.n_graphemes ** n for n in lengths)

    def realisations(self):
        """Candidate phonemes of every grapheme."""
        result, extra = {}, self.n_graphemes
        for num, g in enumerate(self.graphemes):
            if self.g2p == 'many_to_one':
                result[g] = (self.phonemes[num // 2],)
            elif self.g2p == 'one_to_many' and num % 2 == 1:
                result[g] = (self.phonemes[num],) + self.phonemes[extra:extra + self.fanout - 1]
                extra += self.fanout - 1
            else:
                result[g] = (self.phonemes[num],)
        return result

###############################################################################
@dataclass
class SyntheticCorpus:
    """Paths written by the generator and the ground truth in memory."""

    manifest_path:           Path
    phonemic_manifest_path:  Path
    grapheme_alignments:     list
    phoneme_alignments:      list
    g2p:                     dict

###############################################################################
def draw_vocabulary(spec, rng):
    words = set()
    while len(words) < spec.vocabulary_size:
        length = rng.integers(spec.min_word_length, spec.max_word_length + 1)
        words.add(''.join(rng.choice(list(spec.graphemes), size=length)))
    return sorted(words)

def realise(grapheme, spec, options, rng):
    """Phoneme actually pronounced for one grapheme occurrence."""
    if spec.g2p == 'noisy':
        own = options[grapheme][0]
        if rng.random() < spec.noise_rate:
            others = [p for p in spec.phonemes if p != own]
            if others: return others[rng.integers(len(others))]
        return own
    candidates = options[grapheme]
    if len(candidates) == 1: return candidates[0]
    return candidates[rng.integers(len(candidates))]

def render_token(phoneme, n_samples, spec, rng):
    """Sinusoid with a random phase and linear fades."""
    freq = spec.carrier_frequencies[spec.phonemes.index(phoneme)]
    t = numpy.arange(n_samples) / spec.sample_rate
    token = spec.amplitude * numpy.sin(2 * numpy.pi * freq * t + rng.uniform(0, 2 * numpy.pi))
    fade = min(ms_to_samples(spec.fade_ms, spec.sample_rate), n_samples // 2)
    if fade > 0:
        ramp = numpy.linspace(0.0, 1.0, fade)
        token[:fade] *= ramp
        token[-fade:] *= ramp[::-1]
    return token

def frame_labels(segments, n_frames, spec):
    """
    Assign every analysis frame to the segment containing its centre, then
    split every segment evenly over the HMM states.
    """
    shift, window = spec.shift_ms, spec.window_ms
    centres = numpy.arange(n_frames) * shift + window / 2.0
    ends = numpy.array([end for _, _, end, _, _ in segments])
    owner = numpy.minimum(numpy.searchsorted(ends, centres, side='right'), len(segments) - 1)
    states = numpy.zeros(n_frames, dtype=numpy.int64)
    for num in numpy.unique(owner):
        frames = numpy.flatnonzero(owner == num)
        base, extra = divmod(len(frames), 3)
        lengths = numpy.full(3, base)
        lengths[:extra] += 1
        states[frames] = numpy.repeat(numpy.arange(3), lengths)[:len(frames)]
    return owner, states

def generate_utterance(utt_id, words, spec, options, rng):
    """Audio, grapheme symbols and phoneme symbols of one utterance."""
    segments, pieces, position = [], [], 0.0
    def add(grapheme, phoneme, duration_ms, word, audio):
        nonlocal position
        segments.append((grapheme, position, position + duration_ms, phoneme, word))
        pieces.append(audio)
        position += duration_ms
    def silence(ms): return numpy.zeros(ms_to_samples(ms, spec.sample_rate))
    if spec.sil_ms > 0: add(SIL, SIL, spec.sil_ms, -1, silence(spec.sil_ms))
    for num, word in enumerate(words):
        if num > 0: add(SPACE, SPACE, spec.gap_ms, -1, silence(spec.gap_ms))
        for grapheme in word:
            phoneme = realise(grapheme, spec, options, rng)
            ms = spec.token_ms + rng.uniform(-spec.jitter_ms, spec.jitter_ms)
            n_samples = ms_to_samples(ms, spec.sample_rate)
            add(grapheme, phoneme, 1000.0 * n_samples / spec.sample_rate, num,
                render_token(phoneme, n_samples, spec, rng))
    if spec.sil_ms > 0: add(SIL, SIL, spec.sil_ms, -1, silence(spec.sil_ms))
    samples = numpy.concatenate(pieces)
    samples = samples + rng.normal(0.0, spec.noise_level, len(samples))
    n_frames = frame_count(len(samples), ms_to_samples(spec.window_ms, spec.sample_rate),
                           ms_to_samples(spec.shift_ms, spec.sample_rate))
    owner, states = frame_labels(segments, n_frames, spec)
    word_ids = numpy.array([segments[i][4] for i in owner])
    g_ali = FrameAlignment(utt_id, [segments[i][0] for i in owner], states,
                           word_ids, spec.shift_ms)
    p_ali = FrameAlignment(utt_id, [segments[i][3] for i in owner], states,
                           word_ids, spec.shift_ms)
    phonemic = ' '.join(''.join(s[3] for s in segments if s[4] == num)
                        for num in range(len(words)))
    return samples, g_ali, p_ali, phonemic

def generate_synthetic(spec, out_dir, seed=0):
    """Write a corpus under `out_dir` and return a `SyntheticCorpus`."""
    out_dir = Path(out_dir).expanduser()
    (out_dir / 'audio').mkdir(parents=True, exist_ok=True)
    rng = numpy.random.default_rng(seed)
    options = spec.realisations()
    vocabulary = draw_vocabulary(spec, rng)
    g_rows, p_rows, g_alis, p_alis = [], [], [], []
    for num in range(spec.n_utterances):
        utt_id = "utt%05i" % num
        n_words = rng.integers(spec.min_words, spec.max_words + 1)
        words = [vocabulary[i] for i in rng.integers(len(vocabulary), size=n_words)]
        samples, g_ali, p_ali, phonemic = generate_utterance(utt_id, words, spec, options, rng)
        wav = out_dir / 'audio' / (utt_id + '.wav')
        write_wav(wav, samples, spec.sample_rate)
        g_rows.append((wav, ' '.join(words)))
        p_rows.append((wav, phonemic))
        g_alis.append(g_ali)
        p_alis.append(p_ali)
    manifest = out_dir / 'manifest.tsv'
    phonemic_manifest = out_dir / 'phonemic_manifest.tsv'
    write_manifest(manifest, g_rows)
    write_manifest(phonemic_manifest, p_rows)
    write_alignments(out_dir / 'graphemes.ali', g_alis)
    write_alignments(out_dir / 'phonemes.ali', p_alis)
    g2p = pandas.DataFrame([(g, ' '.join(p)) for g, p in options.items()],
                           columns=['grapheme', 'phonemes'])
    g2p.to_csv(out_dir / 'g2p.csv', index=False)
    return SyntheticCorpus(manifest, phonemic_manifest, g_alis, p_alis, options)
