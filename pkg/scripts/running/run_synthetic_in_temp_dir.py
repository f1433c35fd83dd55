#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
A script to run the whole pipeline on a small synthetic corpus to test it.
This version runs with the environment variable set to a temporary directory.

Typically you would run this file from a command line like this:

    ipython3 -i -- ~/repos/graphalign/scripts/running/run_synthetic_in_temp_dir.py
"""

from pathlib import Path
from tempfile import TemporaryDirectory
import os

temp_dir = TemporaryDirectory()
dest_path = Path(temp_dir.name) / "graphalign_data"
# Define the environment variable
# This has to happen before we import anything from graphalign
os.environ["GRAPHALIGN_DATA"] = str(dest_path)

# Internal modules
from graphalign.core.cli import synthesize
from graphalign.core.combo import Combination

# Generate a small corpus and the combo file pointing at it
small = {'synthetic.n_utterances': 60, 'synthetic.vocabulary_size': 12}
combo_path = synthesize(Combination(overrides=small), dest_path / "synthetic")

# Run every stage with a reduced number of epochs
combo = Combination(combo_path, {'corpus.heldout_count': 10, 'am.epochs': 2,
                                 'gmm.rounds': 1, 'gmm.subset_fraction': 0.2})
runner = combo.runner
runner.verbose = True
runner.run_all()
print(runner.qaqc())
print(runner.tail)

# Remove the temporary directory
temp_dir.cleanup()
