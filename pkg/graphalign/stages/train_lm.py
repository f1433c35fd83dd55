#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Word n-gram language model trained on the transcripts of the training set,
each clean utterance counted once.
"""

# Internal modules #
from graphalign.decoder import NGramLm, train_ngram
from graphalign.stages.base import Stage

###############################################################################
class TrainLm(Stage):

    short_name = 'train-lm'
    out_dir    = 'lm'
    requires   = (('prep', 'train'),)

    all_paths = """
    /lm/
    /lm/lm.arpa
    """

    @property
    def lm(self):
        return NGramLm.read_arpa(self.paths.lm)

    def run(self):
        train = self.runner.prep.train
        transcripts = list(train.drop_duplicates('source_id')['transcript'])
        lm = train_ngram(transcripts, self.config['decoder']['order'])
        lm.write_arpa(self.path('lm'))
        sentences = [t.split() for t in transcripts]
        self.log.info("Trained a %i-gram model on %i sentences, %i words in the vocabulary." %
                      (lm.order, len(sentences), len(lm.vocab)))
        self.log.info("Training set perplexity %.3f." % lm.perplexity(sentences))
        return lm
