#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
The runner owns the work directory of one combo and the stage objects
that read and write it.
"""

# Built-in modules #
import logging

# First party modules #
from autopaths.auto_paths import AutoPaths
from plumbing.cache       import property_cached
from plumbing.logger      import create_file_logger
from plumbing.timer       import LogTimer

# Internal modules #
import graphalign
from graphalign.core.errors import ConfigError
from graphalign.qaqc        import Qaqc
from graphalign.stages.prep      import Prep
from graphalign.stages.train_gmm import TrainGmm
from graphalign.stages.align     import Align
from graphalign.stages.train_am  import TrainAm
from graphalign.stages.realign   import Realign
from graphalign.stages.train_lm  import TrainLm
from graphalign.stages.decode    import Decode
from graphalign.stages.score     import Score
from graphalign.stages.analyze   import Analyze

# Constants #
STAGES = ('prep', 'train-gmm', 'align', 'train-am', 'realign', 'train-lm',
          'decode', 'score', 'analyze')

###############################################################################
class Runner(object):
    """
    This object runs the stages of the grapheme acoustic modelling pipeline,
    from a corpus manifest all the way to decoded transcripts and the
    grapheme to phoneme agreement report.

    You can run a single stage or every stage in order:

        >>> from graphalign.core.combo import Combination
        >>> runner = Combination.from_name('synthetic').runner
        >>> runner.run('train-gmm')
        >>> runner.run_all()

    Every stage checks that the artifacts it needs exist before starting
    and records a run manifest at `<work>/manifest/<stage>.json` when done.
    """

    all_paths = """
    /manifest/
    /logs/runner.log
    """

    def __init__(self, combo, verbose=False):
        # Base attributes #
        self.combo   = combo
        self.verbose = verbose
        # How to reference this runner #
        self.short_name = combo.short_name
        # Where the data will be stored for this run #
        self.data_dir = str(combo.work_dir) + '/'
        # Automatically access paths based on a string of many subpaths #
        self.paths = AutoPaths(self.data_dir, self.all_paths)

    def __repr__(self):
        return '%s object on "%s"' % (self.__class__, self.data_dir)

    #---------------------------- Compositions -------------------------------#
    @property_cached
    def prep(self):
        """Corpus loading, inventory, lexicon and features."""
        return Prep(self)

    @property_cached
    def train_gmm(self):
        return TrainGmm(self)

    @property_cached
    def align(self):
        return Align(self)

    @property_cached
    def train_am(self):
        return TrainAm(self)

    @property_cached
    def realign(self):
        """Neural alignments and the model retrained on them."""
        return Realign(self)

    @property_cached
    def train_lm(self):
        return TrainLm(self)

    @property_cached
    def decode(self):
        return Decode(self)

    @property_cached
    def score(self):
        return Score(self)

    @property_cached
    def analyze(self):
        """Confusion matrix, heatmap and agreement score."""
        return Analyze(self)

    @property_cached
    def qaqc(self):
        """Quality checks on the artifacts of this runner."""
        return Qaqc(self)

    @property
    def stages(self):
        """Stage objects keyed by their command line name."""
        return {name: getattr(self, name.replace('-', '_')) for name in STAGES}

    #----------------------------- Properties --------------------------------#
    @property_cached
    def log(self):
        """
        Each runner has its own logger, python warnings raised by the
        library functions are sent to it as well.
        """
        # Pick console level #
        level = 'error'
        if isinstance(self.verbose, bool):
            if self.verbose: level = 'debug'
        else: level = self.verbose
        # Create #
        logger = create_file_logger(self.short_name,
                                    self.paths.log,
                                    console_level = level)
        # Route warnings #
        logging.captureWarnings(True)
        warnings_logger = logging.getLogger('py.warnings')
        for handler in logger.handlers:
            if handler not in warnings_logger.handlers:
                warnings_logger.addHandler(handler)
        return logger

    @property
    def tail(self):
        """A short summary showing just the end of the log file."""
        msg  = "\n## Runner `%s`\n" % self.short_name
        msg += "\nTail of the log file at `%s`\n" % self.paths.log
        msg += self.paths.log.pretty_tail
        return msg

    #------------------------------- Methods ---------------------------------#
    def run(self, stage):
        """Run one stage given by its command line name."""
        if stage not in self.stages:
            msg = "Unknown stage '%s', expected one of %s."
            raise ConfigError(msg % (stage, list(STAGES)))
        self.log.info("Using %s." % graphalign)
        self.log.info("Configuration '%s' with hash %s." % (self.short_name, self.combo.hash))
        return self.stages[stage]()

    def run_all(self):
        """Run every stage in order."""
        timer = LogTimer(self.log)
        timer.print_start()
        for stage in STAGES:
            self.run(stage)
            timer.print_elapsed()
        timer.print_end()
        timer.print_total_elapsed()
        self.log.info("Done.")
