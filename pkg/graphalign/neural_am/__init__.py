#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Recurrent acoustic model trained with frame level cross-entropy.
"""

# Internal modules #
from graphalign.neural_am.lstm import RecurrentAm, PosteriorMatrix
from graphalign.neural_am.loss import ce_loss
from graphalign.neural_am.train import TrainParams, train_ce
from graphalign.neural_am.grad_check import grad_check
from graphalign.neural_am.align import label_priors, neural_align, neural_align_dataset
from graphalign.neural_am.align import save_priors, load_priors
from graphalign.neural_am.checkpoint import save_checkpoint, load_checkpoint
