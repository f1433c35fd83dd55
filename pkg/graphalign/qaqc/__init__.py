#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Quality Assurance and Quality Control of the artifacts of a runner.
"""

# Built-in modules #
from pathlib import Path

# Third party modules #
import pandas

# Internal modules #
from graphalign.core.errors import DataError
from graphalign.hmm_gmm import HmmGmmModel, read_alignments
from graphalign.qaqc.checks import check_alignment, check_model


###############################################################################
class Qaqc:
    """
    Quality Assurance and Quality Control methods attached to a runner.

        >>> runner.qaqc.artifacts
        >>> runner.qaqc.check_alignments('gmm')
        >>> runner.qaqc()
    """

    def __init__(self, runner):
        # Default attributes #
        self.runner = runner

    @property
    def artifacts(self):
        """Every file a stage declares, with the stage and whether it exists."""
        rows = []
        for name, stage in self.runner.stages.items():
            for path in stage.outputs:
                rows.append((name, str(path), Path(str(path)).exists()))
        return pandas.DataFrame(rows, columns=['stage', 'path', 'exists'])

    def check_model(self):
        """Check the GMM checkpoint."""
        model = HmmGmmModel.load(self.runner.train_gmm.paths.model)
        return check_model(model)

    def check_alignments(self, source='gmm'):
        """
        Check the `gmm` or the `realign` alignments against the transcripts.
        Returns a data frame with one row per utterance and the problem found.
        """
        cfg = self.runner.combo.config
        shift = cfg['features']['shift_ms']
        if source == 'gmm': path = self.runner.align.paths.gmm
        else:
            path = self.runner.realign.paths.neural
            shift *= cfg['features']['rate_factor']
        alignments = read_alignments(path, frame_shift_ms=shift)
        targets = self.runner.prep.targets([a.utt_id for a in alignments])
        rows = []
        for ali in alignments:
            try:
                check_alignment(ali, targets[ali.utt_id][0], cfg['gmm']['n_states'])
                rows.append((ali.utt_id, True, ''))
            except DataError as error:
                rows.append((ali.utt_id, False, str(error)))
        return pandas.DataFrame(rows, columns=['utt_id', 'valid', 'problem'])

    def __call__(self):
        """Run every check whose artifacts exist and log a summary."""
        log = self.runner.log
        summary = {}
        if Path(str(self.runner.train_gmm.paths.model)).exists():
            summary['model'] = self.check_model()
        for source, stage in (('gmm', self.runner.align), ('realign', self.runner.realign)):
            if not stage: continue
            df = self.check_alignments(source)
            summary[source] = bool(df['valid'].all())
            for _, row in df[~df['valid']].iterrows(): log.warning(row['problem'])
        log.info("Quality checks: %s" % summary)
        return summary
