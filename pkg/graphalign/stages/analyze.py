#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Grapheme to phoneme correspondence of the final alignments: the confusion
matrix against external phonemic alignments of the same audio, its heatmap
and the agreement score. When reference grapheme alignments are given the
frame accuracy of the final alignments is reported as well.
"""

# Third party modules #
import simplejson

# Internal modules #
from graphalign.analysis import agreement_score, alignment_accuracy, confusion_matrix
from graphalign.analysis import emit_heatmap
from graphalign.core.errors import ConfigError
from graphalign.hmm_gmm import read_alignments
from graphalign.stages.base import Stage

###############################################################################
def bridge_to(alignments, targets):
    """
    Bring 10 ms alignments to the rate and length of the `targets`
    alignments with the same ids. Others are returned unchanged.
    """
    targets = {a.utt_id: a for a in targets}
    result = []
    for ali in alignments:
        target = targets.get(ali.utt_id)
        if target is not None and target.frame_shift_ms != ali.frame_shift_ms:
            factor = int(round(target.frame_shift_ms / ali.frame_shift_ms))
            ali = ali.downsample(factor)
        if target is not None: ali = ali.fit_length(len(target))
        result.append(ali)
    return result

###############################################################################
class Analyze(Stage):

    short_name = 'analyze'
    out_dir    = 'analyze'

    all_paths = """
    /analyze/
    /analyze/confusion.csv
    /analyze/agreement.json
    /analyze/accuracy.json
    """

    @property
    def requires(self):
        if self.config['analysis']['alignments'] == 'gmm': return (('align', 'gmm'),)
        return (('realign', 'neural'),)

    def external(self, key, required=False):
        path = self.config['paths'][key]
        if not path:
            if required:
                raise ConfigError("The configuration value 'paths.%s' is not set." % key)
            return None
        return self.combo.resolve(path)

    def extra_inputs(self):
        paths = [self.external('phonemic_alignments'), self.external('reference_alignments')]
        return [p for p in paths if p is not None]

    @property
    def grapheme_alignments(self):
        shift = self.config['features']['shift_ms']
        if self.config['analysis']['alignments'] == 'gmm':
            return read_alignments(self.runner.align.paths.gmm, frame_shift_ms=shift)
        shift *= self.config['features']['rate_factor']
        return read_alignments(self.runner.realign.paths.neural, frame_shift_ms=shift)

    def read_external(self, key, required=False):
        path = self.external(key, required)
        if path is None: return None
        return read_alignments(path, frame_shift_ms=self.config['features']['shift_ms'])

    def run(self):
        cfg = self.config['analysis']
        graphemic = self.grapheme_alignments
        phonemic = bridge_to(self.read_external('phonemic_alignments', True), graphemic)
        cm = confusion_matrix(graphemic, phonemic)
        emit_heatmap(cm, self.path('confusion'))
        report = agreement_score(cm, cfg['threshold'], cfg['exclude_reserved'])
        report.save(self.path('agreement'))
        self.log.info("Agreement score %.4f at threshold %.2f." % (report.score, report.threshold))
        reference = self.read_external('reference_alignments')
        if reference is not None:
            accuracy = alignment_accuracy(graphemic, bridge_to(reference, graphemic))
            with open(self.path('accuracy'), 'w', encoding='utf-8') as handle:
                simplejson.dump({'alignment_accuracy': accuracy}, handle, indent=4)
            self.log.info("Frame accuracy against the reference alignments %.4f." % accuracy)
        return report
