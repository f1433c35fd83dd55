#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Frame level cross-entropy: the sum over frames of the negative log posterior
of the aligned label.

    >>> ce_loss(posteriors, targets)
"""

# Third party modules #
import numpy
from scipy.special import log_softmax

# Internal modules #
from graphalign.core.errors import DataError

###############################################################################
def ce_loss(posteriors, targets):
    """
    `posteriors` is a `PosteriorMatrix` or a frames x labels array,
    `targets` the label index of every frame.
    """
    values  = getattr(posteriors, 'values', posteriors)
    values  = numpy.asarray(values, dtype=numpy.float64)
    targets = numpy.asarray(targets, dtype=numpy.int64)
    if values.shape[0] != len(targets):
        msg = "%i frames of posteriors but %i aligned frames."
        raise DataError(msg % (values.shape[0], len(targets)))
    picked = values[numpy.arange(len(targets)), targets]
    with numpy.errstate(divide='ignore'):
        return float(-numpy.log(picked).sum())

def ce_from_logits(logits, targets, mask):
    """
    Masked cross-entropy of (frames, batch, labels) logits and the gradient
    of that loss with respect to the logits.
    """
    log_p = log_softmax(logits, axis=-1)
    n_frames, batch, _ = logits.shape
    t_idx, b_idx = numpy.meshgrid(numpy.arange(n_frames), numpy.arange(batch), indexing='ij')
    loss = -(log_p[t_idx, b_idx, targets] * mask).sum()
    grad = numpy.exp(log_p)
    grad[t_idx, b_idx, targets] -= 1.0
    grad *= mask[:, :, None]
    return float(loss), grad
