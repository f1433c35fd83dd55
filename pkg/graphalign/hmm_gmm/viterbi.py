#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Forced alignment by Viterbi over the left-to-right graph composed from the
target symbol sequence.

The score of a path is the sum of the emission scores of its frames plus the
log-probabilities of the transitions it takes. There are no entry or exit
probabilities: a path starts in the first state and ends in the last one,
except that a leading or trailing `<sil>` may be skipped when allowed.
When staying and advancing score the same, staying wins.

The search itself, `forced_viterbi`, only sees a matrix of emission scores,
so the neural aligner reuses it with pseudo log-likelihoods.
"""

# Third party modules #
import numpy

# Internal modules #
from graphalign import SIL
from graphalign.core.errors import DataError
from graphalign.hmm_gmm.alignment import FrameAlignment

###############################################################################
def forced_viterbi(emissions, log_self, log_advance, starts=(0,), ends=None):
    """
    Best monotone path through `N` chained states.

    * `emissions` is a (frames, N) matrix of log scores.
    * `log_self[n]` and `log_advance[n]` score staying in state n and going
      from n to n+1.
    * `starts` and `ends` list the states a path may begin and end in.

    Returns the state index of every frame and the path score.
    """
    emissions = numpy.asarray(emissions, dtype=numpy.float64)
    n_frames, n_states = emissions.shape
    if ends is None: ends = (n_states - 1,)
    shortest = min(e - s + 1 for s in starts for e in ends)
    if n_frames < shortest:
        msg = "%i frames cannot cover a graph needing at least %i states."
        raise DataError(msg % (n_frames, shortest))
    log_self    = numpy.asarray(log_self, dtype=numpy.float64)
    log_advance = numpy.asarray(log_advance, dtype=numpy.float64)
    # Forward pass #
    score = numpy.full(n_states, -numpy.inf)
    score[list(starts)] = emissions[0, list(starts)]
    advanced = numpy.zeros((n_frames, n_states), dtype=bool)
    for t in range(1, n_frames):
        stay = score + log_self
        move = numpy.full(n_states, -numpy.inf)
        move[1:] = score[:-1] + log_advance[:-1]
        advanced[t] = move > stay
        score = numpy.where(advanced[t], move, stay) + emissions[t]
    # Best end state, earlier entries of `ends` win ties #
    ends = list(ends)
    best_end = ends[int(numpy.argmax(score[ends]))]
    total = float(score[best_end])
    if not numpy.isfinite(total):
        raise DataError("No path through the alignment graph has a finite score.")
    # Backtrace #
    path = numpy.empty(n_frames, dtype=numpy.int64)
    state = best_end
    for t in range(n_frames - 1, -1, -1):
        path[t] = state
        if t > 0 and advanced[t, state]: state -= 1
    return path, total

###############################################################################
def graph_bounds(symbols, n_states, skip_sil):
    """Allowed start and end states of the composed graph."""
    n_total = n_states * len(symbols)
    starts, ends = [0], [n_total - 1]
    if skip_sil and len(symbols) > 1:
        if symbols[0] == SIL:  starts.append(n_states)
        if symbols[-1] == SIL: ends.append(n_total - 1 - n_states)
    return tuple(starts), tuple(ends)

def path_to_alignment(path, symbols, words, n_states, utt_id, frame_shift_ms):
    sym_index = path // n_states
    return FrameAlignment(utt_id,
                          [symbols[i] for i in sym_index],
                          path % n_states,
                          numpy.asarray(words)[sym_index],
                          frame_shift_ms)

def check_feasible(n_frames, symbols, n_states, utt_id):
    if not symbols:
        raise DataError("Cannot align '%s' to an empty symbol sequence." % utt_id)
    if n_frames < n_states * len(symbols):
        msg = "Utterance '%s' has %i frames, too few for %i symbols of %i states."
        raise DataError(msg % (utt_id, n_frames, len(symbols), n_states))

def viterbi_align(model, features, symbols, words=None, skip_sil=False, utt_id=''):
    """
    Force align the features of one utterance to its symbol sequence with
    the GMM emissions and the model transitions.
    Returns the `FrameAlignment` and its log-likelihood.
    """
    symbols = list(symbols)
    check_feasible(features.n_frames, symbols, model.n_states, utt_id)
    if words is None: words = [-1] * len(symbols)
    rows = model.rows_of(symbols)
    unique, inverse = numpy.unique(rows, return_inverse=True)
    emissions = model.state_log_likelihoods(features.values, unique)[:, inverse]
    log_trans = model.log_transitions[rows]
    starts, ends = graph_bounds(symbols, model.n_states, skip_sil)
    path, score = forced_viterbi(emissions, log_trans[:, 0], log_trans[:, 1], starts, ends)
    ali = path_to_alignment(path, symbols, words, model.n_states, utt_id,
                            features.frame_shift_ms)
    return ali, score

def alignment_log_likelihood(model, features, alignment):
    """Score of a given alignment under the model, as `viterbi_align` computes it."""
    rows = numpy.array([model.row(s, k) for s, k in zip(alignment.symbols, alignment.states)])
    unique, inverse = numpy.unique(rows, return_inverse=True)
    emissions = model.state_log_likelihoods(features.values, unique)
    total = emissions[numpy.arange(len(rows)), inverse].sum()
    if len(rows) > 1:
        moved = alignment.boundaries[1:] | (alignment.states[1:] != alignment.states[:-1])
        total += model.log_transitions[rows[:-1], moved.astype(int)].sum()
    return float(total)
