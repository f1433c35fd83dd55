#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Word error rates of the decoded held-out utterances, plain and
transliterated, together with the most frequent word substitutions.
"""

# Internal modules #
from graphalign.decoder import TransliterationMap, score_corpus, substitution_pairs
from graphalign.stages.base import Stage

###############################################################################
class Score(Stage):

    short_name = 'score'
    out_dir    = 'score'

    all_paths = """
    /score/
    /score/am_utterances.csv
    /score/am_corpus.csv
    /score/am_substitutions.csv
    /score/realign_utterances.csv
    /score/realign_corpus.csv
    /score/realign_substitutions.csv
    """

    @property
    def model(self): return self.config['decoder']['model']

    @property
    def requires(self):
        return (('prep', 'heldout'), ('decode', self.model + '_hyps'))

    def extra_inputs(self):
        path = self.config['paths']['transliteration']
        return [self.combo.resolve(path)] if path else []

    def remove_outputs(self):
        """Scores of the other acoustic model are kept."""
        pass

    @property
    def outputs(self):
        return [self.paths[self.model + suffix]
                for suffix in ('_utterances', '_corpus', '_substitutions')]

    @property
    def transliteration(self):
        path = self.config['paths']['transliteration']
        if not path: return TransliterationMap()
        return TransliterationMap.load(self.combo.resolve(path))

    def run(self):
        heldout = self.runner.prep.heldout
        refs = {u: t.split() for u, t in zip(heldout['utt_id'], heldout['transcript'])}
        hyps = self.runner.decode.hyps
        tmap = self.transliteration
        per_utt, corpus = score_corpus(hyps, refs, tmap)
        per_utt.to_csv(self.path(self.model + '_utterances'), index=False)
        corpus.to_csv(self.path(self.model + '_corpus'), index=False)
        subs = substitution_pairs([hyps[u] for u in refs], list(refs.values()), tmap)
        subs.to_csv(self.path(self.model + '_substitutions'), index=False)
        row = corpus.iloc[0]
        self.log.info("WER %.2f%%, transliterated WER %.2f%% on %i utterances ('%s' model)." %
                      (100 * row['wer'], 100 * row['translit_wer'], row['utterances'], self.model))
        return corpus
