#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Frame level alignments, the exchange format between the GMM, the neural
model and the analysis code.

Every frame carries a symbol, the HMM state index within that symbol and the
index of the word it belongs to (-1 for reserved symbols). Two consecutive
instances of the same symbol are told apart by the state index falling back.

Alignments of many utterances are stored together as text, one
`utt-id frame symbol state word-index` row per frame:

    >>> from graphalign.hmm_gmm.alignment import read_alignments
    >>> alignments = read_alignments("gmm.ali", frame_shift_ms=10)
    >>> alignments[0].segments()
"""

# Built-in modules #
import csv
from dataclasses import dataclass
from pathlib import Path

# Third party modules #
import numpy
import pandas

# Internal modules #
from graphalign.core.errors import DataError
from graphalign.features.stacking import majority_vote

# Constants #
COLUMNS = ['utt_id', 'frame', 'symbol', 'state', 'word']

###############################################################################
@dataclass(frozen=True, eq=False)
class FrameAlignment:
    """Per frame labels of one utterance."""

    utt_id:         str
    symbols:        tuple
    states:         numpy.ndarray
    words:          numpy.ndarray
    frame_shift_ms: float = 10.0

    def __post_init__(self):
        symbols = tuple(self.symbols)
        states  = numpy.asarray(self.states, dtype=numpy.int64)
        words   = numpy.asarray(self.words, dtype=numpy.int64)
        if not len(symbols) == len(states) == len(words):
            msg = "Alignment '%s' has %i symbols, %i states and %i words."
            raise DataError(msg % (self.utt_id, len(symbols), len(states), len(words)))
        object.__setattr__(self, 'symbols', symbols)
        object.__setattr__(self, 'states', states)
        object.__setattr__(self, 'words', words)

    def __repr__(self):
        return '%s object "%s" (%i frames @%gms)' % (self.__class__, self.utt_id,
                                                    len(self), self.frame_shift_ms)

    def __len__(self): return len(self.symbols)

    def __eq__(self, other):
        if not isinstance(other, FrameAlignment): return NotImplemented
        return (self.utt_id == other.utt_id and
                self.symbols == other.symbols and
                self.frame_shift_ms == other.frame_shift_ms and
                numpy.array_equal(self.states, other.states) and
                numpy.array_equal(self.words, other.words))

    #----------------------------- Properties --------------------------------#
    @property
    def boundaries(self):
        """Boolean mask of the frames that start a new symbol instance."""
        starts = numpy.ones(len(self), dtype=bool)
        if len(self) > 1:
            changed = numpy.array([a != b for a, b in zip(self.symbols[:-1], self.symbols[1:])])
            starts[1:] = changed | (self.states[1:] < self.states[:-1])
        return starts

    def segments(self):
        """
        List of `(symbol, first_frame, end_frame, word)` tuples, one per
        symbol instance, end excluded.
        """
        starts = numpy.flatnonzero(self.boundaries).tolist() + [len(self)]
        return [(self.symbols[a], a, b, int(self.words[a]))
                for a, b in zip(starts[:-1], starts[1:])]

    @property
    def symbol_sequence(self):
        """The aligned symbol instances, one entry per segment."""
        return [seg[0] for seg in self.segments()]

    #------------------------------- Methods ---------------------------------#
    def validate(self, targets=None, n_states=3):
        """
        Check that state indices are in range and never decrease inside a
        symbol instance, and optionally that the symbol instances equal the
        target sequence.
        """
        if numpy.any(self.states < 0) or numpy.any(self.states >= n_states):
            raise DataError("Alignment '%s' has state indices out of range." % self.utt_id)
        for symbol, start, end, _ in self.segments():
            if numpy.any(numpy.diff(self.states[start:end]) < 0):
                msg = "Alignment '%s' has decreasing states inside '%s' at frame %i."
                raise DataError(msg % (self.utt_id, symbol, start))
        if targets is not None and self.symbol_sequence != list(targets):
            msg = "Alignment '%s' does not spell its transcript: %s != %s."
            raise DataError(msg % (self.utt_id, self.symbol_sequence, list(targets)))
        return True

    def downsample(self, rate_factor=3):
        """
        Carry the labels to a frame rate `rate_factor` times lower. Each
        output frame takes the majority symbol of its bucket, ties going to
        the earliest, together with the state and word of the first bucket
        frame holding that symbol.
        """
        picks = []
        winners = majority_vote(self.symbols, rate_factor)
        for num, winner in enumerate(winners):
            start = num * rate_factor
            bucket = self.symbols[start:start + rate_factor]
            picks.append(start + bucket.index(winner))
        return FrameAlignment(self.utt_id,
                              [self.symbols[i] for i in picks],
                              self.states[picks],
                              self.words[picks],
                              self.frame_shift_ms * rate_factor)

    def fit_length(self, n_frames):
        """Trim or repeat the last frame so the alignment has `n_frames` frames."""
        if n_frames == len(self): return self
        picks = numpy.minimum(numpy.arange(n_frames), len(self) - 1)
        return FrameAlignment(self.utt_id, [self.symbols[i] for i in picks],
                              self.states[picks], self.words[picks],
                              self.frame_shift_ms)

    def to_frame(self):
        return pandas.DataFrame({'utt_id': self.utt_id,
                                 'frame':  numpy.arange(len(self)),
                                 'symbol': list(self.symbols),
                                 'state':  self.states,
                                 'word':   self.words}, columns=COLUMNS)

###############################################################################
def write_alignments(path, alignments):
    """Write many alignments to one space separated text file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frames = [ali.to_frame() for ali in alignments]
    df = pandas.concat(frames) if frames else pandas.DataFrame(columns=COLUMNS)
    df.to_csv(path, sep=' ', index=False, header=False, quoting=csv.QUOTE_NONE)
    return path

def read_alignments(path, frame_shift_ms=10.0):
    """Read a file written by `write_alignments`, in file order."""
    path = Path(path)
    if path.stat().st_size == 0: return []
    df = pandas.read_csv(path, sep=' ', header=None, names=COLUMNS,
                         quoting=csv.QUOTE_NONE, keep_default_na=False,
                         dtype={'utt_id': str, 'symbol': str})
    result = []
    for utt_id, group in df.groupby('utt_id', sort=False):
        if not numpy.array_equal(group['frame'].values, numpy.arange(len(group))):
            raise DataError("Frames of '%s' in '%s' are not consecutive." % (utt_id, path))
        result.append(FrameAlignment(utt_id, group['symbol'].tolist(),
                                     group['state'].values, group['word'].values,
                                     frame_shift_ms))
    return result
