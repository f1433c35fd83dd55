#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Acoustic front-ends: log-mel for the neural model, PLP with deltas for the
GMM flat start, stacking and down-sampling to the 30 ms rate.
"""

# Internal modules #
from graphalign.features.matrix import FeatureMatrix
from graphalign.features.mel import log_mel
from graphalign.features.plp import plp_with_deltas, compute_deltas
from graphalign.features.stacking import stack_downsample, majority_vote
