#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Beam search decoding of the held-out utterances with the graphemic lexicon,
the n-gram model and either the first neural model (`decoder.model: am`)
or the realigned one (`decoder.model: realign`).
"""

# Built-in modules #
from functools import partial

# Third party modules #
import pandas

# Internal modules #
from graphalign.core.parallel import map_utterances
from graphalign.decoder import beam_decode
from graphalign.neural_am import load_checkpoint, load_priors
from graphalign.stages.base import Stage

###############################################################################
def decode_one(item, am, priors, lm, lexicon, cfg):
    utt_id, fm = item
    words = beam_decode(am, priors, lm, lexicon, fm, cfg['beam'], cfg['lm_weight'],
                        cfg['kappa'], cfg['insertion_penalty'])
    return utt_id, ' '.join(words)

###############################################################################
class Decode(Stage):

    short_name = 'decode'
    out_dir    = 'decode'

    all_paths = """
    /decode/
    /decode/am_hyps.tsv
    /decode/realign_hyps.tsv
    """

    @property
    def model_stage(self):
        """The stage whose acoustic model is used."""
        return {'am': self.runner.train_am,
                'realign': self.runner.realign}[self.config['decoder']['model']]

    @property
    def requires(self):
        attribute = self.model_stage.short_name.replace('-', '_')
        return (('prep', 'heldout'), ('prep', 'lexicon'), ('prep', 'stacked_dir'),
                ('train_lm', 'lm'), (attribute, 'model'), (attribute, 'priors'))

    @property
    def hyps_path(self):
        return self.paths[self.config['decoder']['model'] + '_hyps']

    def remove_outputs(self):
        """Hypotheses of the other acoustic model are kept."""
        pass

    @property
    def outputs(self): return [self.hyps_path]

    @property
    def hyps(self):
        """Dictionary of utterance id to hypothesis word list."""
        df = pandas.read_csv(str(self.hyps_path), sep='\t', dtype=str, keep_default_na=False)
        return {u: h.split() for u, h in zip(df['utt_id'], df['hyp'])}

    def run(self):
        prep = self.runner.prep
        am = load_checkpoint(self.model_stage.paths.model)
        priors = load_priors(am, self.model_stage.paths.priors)
        lm = self.runner.train_lm.lm
        features = prep.features('stacked', prep.heldout_ids)
        cfg = dict(self.config['decoder'], kappa=self.config['am']['kappa'])
        func = partial(decode_one, am=am, priors=priors, lm=lm, lexicon=prep.lexicon,
                       cfg=cfg)
        rows = map_utterances(func, list(features.items()), self.workers, desc="Decoding")
        df = pandas.DataFrame(rows, columns=['utt_id', 'hyp'])
        path = self.path(self.config['decoder']['model'] + '_hyps')
        df.to_csv(path, sep='\t', index=False)
        self.log.info("Decoded %i held-out utterances with the '%s' model." %
                      (len(df), self.config['decoder']['model']))
        return df
