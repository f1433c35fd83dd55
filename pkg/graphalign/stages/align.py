#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Forced alignment of the training set with the final GMM, at the 10 ms
feature rate. These alignments are the targets of the first neural model.
"""

# Internal modules #
from graphalign.analysis import segment_table
from graphalign.hmm_gmm import HmmGmmModel, align_dataset, write_alignments
from graphalign.stages.base import Stage

###############################################################################
class Align(Stage):

    short_name = 'align'
    out_dir    = 'align'
    requires   = (('prep', 'train'), ('prep', 'inventory'), ('prep', 'plp_dir'),
                  ('train_gmm', 'model'))

    all_paths = """
    /align/
    /align/gmm.ali
    /align/segments.csv
    """

    def run(self):
        prep = self.runner.prep
        model = HmmGmmModel.load(self.runner.train_gmm.paths.model)
        train_ids = prep.train_ids
        alignments, total = align_dataset(model, prep.features('plp', train_ids),
                                          prep.targets(train_ids),
                                          self.config['lexicon']['optional_sil'],
                                          self.workers, desc="GMM alignment")
        self.log.info("Aligned %i utterances, total log-likelihood %.3f." %
                      (len(alignments), total))
        write_alignments(self.path('gmm'), alignments)
        segment_table(alignments, prep.transcripts).to_csv(self.path('segments'), index=False)
        return alignments
