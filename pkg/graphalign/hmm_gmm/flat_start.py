#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Flat start: the audio of each utterance is cut evenly along the states of its
target symbol sequence, no prior aligner needed.

    >>> from graphalign.hmm_gmm.flat_start import flat_start_segment
    >>> flat_start_segment(13, ['g', 'o']).states
    array([0, 0, 0, 1, 1, 2, 2, 0, 0, 1, 1, 2, 2])
"""

# Built-in modules #
import warnings

# Third party modules #
import numpy

# Internal modules #
from graphalign.core.errors import DataError
from graphalign.hmm_gmm.alignment import FrameAlignment

###############################################################################
def flat_start_segment(n_frames, symbols, words=None, n_states=3, utt_id='',
                       frame_shift_ms=10.0):
    """
    Give every state of the composed left-to-right graph a contiguous span.
    Span lengths differ by at most one, the leftmost states taking the
    remainder.
    """
    symbols = list(symbols)
    n_total = n_states * len(symbols)
    if not symbols:
        raise DataError("Cannot segment '%s' along an empty symbol sequence." % utt_id)
    if n_frames < n_total:
        msg = "Utterance '%s' has %i frames, fewer than its %i states."
        raise DataError(msg % (utt_id, n_frames, n_total))
    if words is None: words = [-1] * len(symbols)
    base, extra = divmod(n_frames, n_total)
    lengths = numpy.full(n_total, base)
    lengths[:extra] += 1
    positions = numpy.repeat(numpy.arange(n_total), lengths)
    sym_index = positions // n_states
    return FrameAlignment(utt_id,
                          [symbols[i] for i in sym_index],
                          positions % n_states,
                          numpy.asarray(words)[sym_index],
                          frame_shift_ms)

def flat_start_alignments(features, targets, n_states=3):
    """
    Flat start segmentation of many utterances. `features` and `targets`
    are dictionaries keyed by utterance id, targets being `(symbols, words)`.
    Utterances too short for their symbol sequence are left out with a
    warning.
    """
    result = []
    for utt_id, fm in features.items():
        symbols, words = targets[utt_id]
        try:
            ali = flat_start_segment(fm.n_frames, symbols, words, n_states,
                                     utt_id, fm.frame_shift_ms)
        except DataError as error:
            warnings.warn("%s Excluded from the flat start." % error)
            continue
        result.append(ali)
    return result

###############################################################################
def select_subset(utt_ids, fraction, seed):
    """
    Deterministic seeded choice of `fraction` of the utterances, at least
    one, returned in the original order.
    """
    utt_ids = list(utt_ids)
    if not utt_ids: return []
    count = max(1, int(numpy.floor(fraction * len(utt_ids))))
    rng = numpy.random.default_rng(seed)
    chosen = numpy.sort(rng.choice(len(utt_ids), size=min(count, len(utt_ids)), replace=False))
    return [utt_ids[i] for i in chosen]
