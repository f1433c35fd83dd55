#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Flat start HMM-GMM training. A single Gaussian per state is first trained
on a small subset of evenly segmented utterances. Rounds of Viterbi
realignment and EM on the full training set then grow the mixtures one
split at a time up to their target count, followed by `gmm.rounds` more
rounds at that count.
"""

# Internal modules #
from graphalign.core.errors import DataError
from graphalign.hmm_gmm import flat_start_alignments, realign_loop, select_subset, train_em
from graphalign.hmm_gmm.realign import growth_rounds
from graphalign.stages.base import Stage

###############################################################################
class TrainGmm(Stage):

    short_name = 'train-gmm'
    out_dir    = 'gmm'
    requires   = (('prep', 'train'), ('prep', 'inventory'), ('prep', 'plp_dir'))

    all_paths = """
    /gmm/
    /gmm/model.gahg
    /gmm/em_history.csv
    /gmm/realign_history.csv
    """

    def run(self):
        gmm  = self.config['gmm']
        prep = self.runner.prep
        train_ids = prep.train_ids
        features  = prep.features('plp', train_ids)
        targets   = prep.targets(train_ids)
        symbols   = prep.inventory.symbols
        # Flat start on a subset #
        subset = select_subset(train_ids, gmm['subset_fraction'], self.seed)
        self.log.info("Flat start on %i of %i utterances." % (len(subset), len(train_ids)))
        alignments = flat_start_alignments({i: features[i] for i in subset},
                                           {i: targets[i] for i in subset},
                                           gmm['n_states'])
        if not alignments:
            raise DataError("No utterance of the flat start subset is long enough.")
        model, history = train_em(features, alignments, symbols, 1,
                                  gmm['em_iters'], gmm['variance_floor'], gmm['n_states'])
        history.to_csv(self.path('em_history'), index=False)
        self.log.info("Flat start EM log-likelihood %.3f." % history.iloc[-1]['log_likelihood'])
        # Realignment on the full training set #
        rounds = growth_rounds(model.n_mix, gmm['mixtures']) + gmm['rounds']
        model, _, rounds = realign_loop(model, features, targets, alignments, rounds,
                                        gmm['em_iters'], self.config['lexicon']['optional_sil'],
                                        self.workers, target_mixtures=gmm['mixtures'])
        rounds.to_csv(self.path('realign_history'), index=False)
        for _, row in rounds.iterrows():
            self.log.info("Realignment round %i at %i mixtures, log-likelihood %.3f." %
                          (row['round'], row['mixtures'], row['log_likelihood']))
        model.save(self.path('model'))
        return model
