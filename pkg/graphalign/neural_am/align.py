#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Hybrid forced alignment with the recurrent model. The emission score of an
HMM state is the pseudo log-likelihood `log posterior - kappa * log prior`
of its label. Transitions are uniform and add the same constant to every
path, so they are left out.
"""

# Built-in modules #
from functools import partial

# Third party modules #
import numpy
import pandas

# Internal modules #
from graphalign.core.errors import DataError
from graphalign.core.parallel import map_utterances
from graphalign.hmm_gmm.viterbi import check_feasible, forced_viterbi
from graphalign.hmm_gmm.viterbi import graph_bounds, path_to_alignment

###############################################################################
def label_priors(am, alignments):
    """Add-one smoothed label frequencies of the training alignments."""
    counts = numpy.ones(am.n_labels)
    for ali in alignments:
        numpy.add.at(counts, am.targets_of(ali), 1)
    return counts / counts.sum()

def save_priors(am, priors, path):
    df = pandas.DataFrame({'label': am.labels, 'prior': priors})
    df.to_csv(str(path), index=False)

def load_priors(am, path):
    """Priors stored by `save_priors`, checked against the labels of `am`."""
    df = pandas.read_csv(str(path), dtype={'label': str}, keep_default_na=False)
    if tuple(df['label']) != tuple(am.labels):
        raise DataError("The priors in '%s' do not match the model labels." % path)
    return df['prior'].to_numpy(dtype=numpy.float64)

def pseudo_log_likelihoods(am, features, priors, kappa=1.0):
    """Frames x labels scores used by alignment and decoding."""
    return am.log_posteriors(features) - kappa * numpy.log(priors)[None, :]

def graph_emissions(am, scores, symbols):
    """Columns of the label scores for the states of the composed graph."""
    cols = [am.label_of(s, k) for s in symbols for k in range(am.n_states)]
    return scores[:, cols]

def neural_align(am, priors, features, symbols, words=None, kappa=1.0,
                 skip_sil=False, utt_id=''):
    """Force align one utterance, returns the `FrameAlignment` and its score."""
    symbols = list(symbols)
    check_feasible(features.n_frames, symbols, am.n_states, utt_id)
    if words is None: words = [-1] * len(symbols)
    scores = pseudo_log_likelihoods(am, features, priors, kappa)
    emissions = graph_emissions(am, scores, symbols)
    flat = numpy.zeros(emissions.shape[1])
    starts, ends = graph_bounds(symbols, am.n_states, skip_sil)
    path, score = forced_viterbi(emissions, flat, flat, starts, ends)
    ali = path_to_alignment(path, symbols, words, am.n_states, utt_id,
                            features.frame_shift_ms)
    return ali, score

def align_one(item, am, priors, kappa, skip_sil):
    utt_id, fm, symbols, words = item
    return neural_align(am, priors, fm, symbols, words, kappa, skip_sil, utt_id)

def neural_align_dataset(am, priors, features, targets, kappa=1.0,
                         skip_sil=False, workers=1, desc=None):
    """Neural alignments of every utterance, in `features` order."""
    items = [(utt_id, fm) + tuple(targets[utt_id]) for utt_id, fm in features.items()]
    func = partial(align_one, am=am, priors=priors, kappa=kappa, skip_sil=skip_sil)
    results = map_utterances(func, items, workers, desc)
    return [ali for ali, _ in results], float(sum(s for _, s in results))
