#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Frame level cross-entropy training of the recurrent acoustic model on the
GMM alignments, bridged from the 10 ms rate to the stacked feature rate.
"""

# Third party modules #
import numpy

# Internal modules #
from graphalign.hmm_gmm import read_alignments
from graphalign.neural_am import RecurrentAm, TrainParams, label_priors, train_ce
from graphalign.neural_am import save_priors
from graphalign.neural_am.train import standardization
from graphalign.stages.base import Stage

###############################################################################
def train_params(config, seed):
    am = config['am']
    return TrainParams(learning_rate = am['learning_rate'],
                       momentum      = am['momentum'],
                       decay         = am['decay'],
                       epochs        = am['epochs'],
                       batch_size    = am['batch_size'],
                       chunk_frames  = am['chunk_frames'],
                       clip_norm     = am['clip_norm'],
                       seed          = seed,
                       progress      = True)

def train_acoustic_model(config, symbols, features, alignments, seed, checkpoint_path):
    """
    A freshly initialised model trained on `alignments`, which must be at
    the rate of `features`. Returns the model, its loss trace and the label
    priors.
    """
    am_cfg = config['am']
    mean, std = standardization([features[a.utt_id] for a in alignments])
    am = RecurrentAm.initialize(mean.shape[0], symbols, am_cfg['layers'], am_cfg['hidden'],
                                am_cfg['states'], numpy.random.default_rng(seed),
                                input_mean=mean, input_std=std,
                                n_states=config['gmm']['n_states'])
    am, trace = train_ce(am, features, alignments, train_params(config, seed), checkpoint_path)
    return am, trace, label_priors(am, alignments)

def bridge(alignments, features, rate_factor):
    """10 ms alignments brought to the frame count of the stacked features."""
    return [ali.downsample(rate_factor).fit_length(features[ali.utt_id].n_frames)
            for ali in alignments]

###############################################################################
class TrainAm(Stage):

    short_name = 'train-am'
    out_dir    = 'am'
    requires   = (('prep', 'inventory'), ('prep', 'stacked_dir'), ('align', 'gmm'))

    all_paths = """
    /am/
    /am/model.gaam
    /am/priors.csv
    /am/trace.csv
    """

    def run(self):
        prep = self.runner.prep
        shift = self.config['features']['shift_ms']
        alignments = read_alignments(self.runner.align.paths.gmm, frame_shift_ms=shift)
        features = prep.features('stacked', [a.utt_id for a in alignments])
        alignments = bridge(alignments, features, self.config['features']['rate_factor'])
        am, trace, priors = train_acoustic_model(self.config, prep.inventory.symbols,
                                                 features, alignments, self.seed,
                                                 self.path('model'))
        self.log.info("Trained %r, last loss %.4f." % (am, trace['ce_loss'].iloc[-1]))
        save_priors(am, priors, self.path('priors'))
        trace.to_csv(self.path('trace'), index=False)
        return am
