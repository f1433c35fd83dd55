#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Lexicon-free grapheme acoustic modelling.

- The pipeline is driven by `graphalign.core.runner.Runner`, configured by a
  YAML combo file (see `graphalign.core.combo`).
- Each stage of the pipeline is a composition object in `graphalign.stages`.
- The numerical building blocks live in `graphalign.features`,
  `graphalign.hmm_gmm`, `graphalign.neural_am` and `graphalign.decoder`.
- Grapheme/phoneme comparisons are in `graphalign.analysis`.
"""

# Special variables #
__version__ = '0.3.1'

# Built-in modules #
import os
import sys
import pathlib

# First party modules #
from autopaths import Path
from autopaths.dir_path import DirectoryPath

# Constants #
project_name = 'graphalign'

# Reserved symbols of every grapheme inventory #
SPACE = '<space>'
SIL   = '<sil>'
RESERVED_SYMBOLS = (SPACE, SIL)

# Get paths to module #
self       = sys.modules[__name__]
module_dir = Path(os.path.dirname(self.__file__))

# The repository directory #
repos_dir = module_dir.directory

# Where is the data, default case #
graphalign_data_dir = DirectoryPath("~/graphalign/graphalign_data/")

# But you can override that with an environment variable #
if os.environ.get("GRAPHALIGN_DATA"):
    graphalign_data_dir = DirectoryPath(os.environ['GRAPHALIGN_DATA'])

# Same location as a pathlib object #
graphalign_data_pathlib = pathlib.Path(str(graphalign_data_dir))
