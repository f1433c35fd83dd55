#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
The align then re-train alternation. Each round force aligns the whole
dataset with the current model then continues EM from that model on the
new alignments. At a fixed mixture count the total Viterbi log-likelihood
of successive rounds never decreases.

Mixtures can also be grown along the way, one step of the split schedule
per round, each split being fitted on frames aligned by the model of the
previous size.
"""

# Built-in modules #
from functools import partial

# Third party modules #
import pandas

# Internal modules #
from graphalign.core.parallel import map_utterances
from graphalign.hmm_gmm.em import next_mixture_count, split_schedule, train_em
from graphalign.hmm_gmm.viterbi import viterbi_align

###############################################################################
def align_one(item, model, skip_sil):
    """Module level so that worker processes can receive it."""
    utt_id, fm, symbols, words = item
    return viterbi_align(model, fm, symbols, words, skip_sil, utt_id)

def align_dataset(model, features, targets, skip_sil=False, workers=1, desc=None):
    """
    Viterbi alignment of every utterance in `features` order.
    Returns the alignments and their summed log-likelihood.
    """
    items = [(utt_id, fm) + tuple(targets[utt_id]) for utt_id, fm in features.items()]
    results = map_utterances(partial(align_one, model=model, skip_sil=skip_sil),
                             items, workers, desc)
    alignments = [ali for ali, _ in results]
    return alignments, float(sum(score for _, score in results))

def growth_rounds(start_mixtures, target_mixtures):
    """Number of rounds needed to grow from `start_mixtures` to the target."""
    return len([m for m in split_schedule(target_mixtures) if m > start_mixtures])

def realign_loop(model, features, targets, alignments, rounds=4,
                 em_iters_per_split=4, skip_sil=False, workers=1,
                 target_mixtures=None):
    """
    Run `rounds` rounds of alignment and EM.

    * `features` maps utterance ids to feature matrices.
    * `targets` maps utterance ids to `(symbols, words)`.
    * `target_mixtures`, when above the mixture count of `model`, makes
      each round split the components one step further until it is
      reached. The remaining rounds keep the count fixed.

    Returns the final model, the final alignments and a data frame with the
    mixture count and the total Viterbi log-likelihood of each round. With
    zero rounds the inputs are returned unchanged.
    """
    history = []
    for num in range(rounds):
        alignments, total = align_dataset(model, features, targets, skip_sil, workers)
        history.append((num, model.n_mix, total))
        mixtures = next_mixture_count(model.n_mix, target_mixtures)
        model, _ = train_em(features, alignments, model.symbols,
                            target_mixtures=mixtures,
                            em_iters_per_split=em_iters_per_split,
                            n_states=model.n_states, init_model=model)
    history = pandas.DataFrame(history, columns=['round', 'mixtures', 'log_likelihood'])
    return model, alignments, history
