#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Realignment with the recurrent model: the training set is force aligned
with the current neural model and a new model is trained from scratch on
those alignments, `am.realign_rounds` times.
"""

# Third party modules #
import pandas

# Internal modules #
from graphalign.analysis import segment_table
from graphalign.hmm_gmm import write_alignments
from graphalign.neural_am import load_checkpoint, load_priors, neural_align_dataset
from graphalign.neural_am import save_checkpoint, save_priors
from graphalign.stages.base import Stage
from graphalign.stages.train_am import train_acoustic_model

###############################################################################
class Realign(Stage):

    short_name = 'realign'
    out_dir    = 'realign'
    requires   = (('prep', 'train'), ('prep', 'inventory'), ('prep', 'stacked_dir'),
                  ('train_am', 'model'), ('train_am', 'priors'))

    all_paths = """
    /realign/
    /realign/neural.ali
    /realign/model.gaam
    /realign/priors.csv
    /realign/trace.csv
    /realign/segments.csv
    """

    def run(self):
        prep = self.runner.prep
        am_cfg = self.config['am']
        am = load_checkpoint(self.runner.train_am.paths.model)
        priors = load_priors(am, self.runner.train_am.paths.priors)
        train_ids = prep.train_ids
        features = prep.features('stacked', train_ids)
        targets = prep.targets(train_ids)
        traces = []
        for num in range(am_cfg['realign_rounds']):
            alignments, total = neural_align_dataset(am, priors, features, targets,
                                                     am_cfg['kappa'],
                                                     self.config['lexicon']['optional_sil'],
                                                     self.workers, desc="Neural alignment")
            self.log.info("Round %i: aligned %i utterances, total score %.3f." %
                          (num, len(alignments), total))
            am, trace, priors = train_acoustic_model(self.config, prep.inventory.symbols,
                                                     features, alignments, self.seed,
                                                     self.path('model'))
            traces.append(trace.assign(round=num))
            self.log.info("Round %i: last loss %.4f." % (num, trace['ce_loss'].iloc[-1]))
        # Without rounds the loaded model aligns the data and is copied as is #
        if not traces:
            alignments, _ = neural_align_dataset(am, priors, features, targets,
                                                 am_cfg['kappa'],
                                                 self.config['lexicon']['optional_sil'],
                                                 self.workers)
            save_checkpoint(am, self.path('model'))
        write_alignments(self.path('neural'), alignments)
        segment_table(alignments, prep.transcripts).to_csv(self.path('segments'), index=False)
        save_priors(am, priors, self.path('priors'))
        columns = ['round', 'step', 'epoch', 'ce_loss']
        trace = pandas.concat(traces, ignore_index=True) if traces else pandas.DataFrame()
        trace.reindex(columns=columns).to_csv(self.path('trace'), index=False)
        return alignments
