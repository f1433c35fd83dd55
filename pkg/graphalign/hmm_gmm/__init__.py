#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Flat start grapheme HMM-GMM training and forced alignment.
"""

# Internal modules #
from graphalign.hmm_gmm.alignment import FrameAlignment, read_alignments, write_alignments
from graphalign.hmm_gmm.model import HmmGmmModel
from graphalign.hmm_gmm.flat_start import flat_start_segment, flat_start_alignments, select_subset
from graphalign.hmm_gmm.em import train_em
from graphalign.hmm_gmm.viterbi import viterbi_align, forced_viterbi
from graphalign.hmm_gmm.realign import realign_loop, align_dataset
