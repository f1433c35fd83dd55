#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Left-context frame stacking with down-sampling, and the rule that carries
frame labels from the 10 ms rate to the down-sampled rate.

    >>> from graphalign.features.stacking import stack_downsample
    >>> stacked = stack_downsample(log_mel(segment))
    >>> stacked.dims, stacked.frame_shift_ms
    (640, 30.0)
"""

# Built-in modules #
from collections import Counter

# Third party modules #
import numpy

# Internal modules #
from graphalign.core.errors import DataError
from graphalign.features.matrix import FeatureMatrix

###############################################################################
def stack_indices(n_frames, left_context=7, rate_factor=3):
    """
    Input frame indices used by every output frame: row t' holds
    `rate_factor*t' - left_context ... rate_factor*t'`, clipped at zero.
    """
    n_out   = -(-n_frames // rate_factor)
    centers = rate_factor * numpy.arange(n_out)
    offsets = numpy.arange(-left_context, 1)
    return numpy.maximum(centers[:, None] + offsets[None, :], 0)

def stack_downsample(fm, left_context=7, rate_factor=3):
    """
    Concatenate every kept frame with its `left_context` predecessors,
    replicating the first frame at the utterance start, and keep one frame
    out of `rate_factor`. The current frame is in the last slot.
    """
    if fm.kind != 'log-mel':
        raise DataError("Only log-mel features are stacked, got '%s'." % fm.kind)
    if fm.n_frames < 1:
        raise DataError("Cannot stack an empty feature matrix.")
    rows   = stack_indices(fm.n_frames, left_context, rate_factor)
    values = fm.values[rows].reshape(rows.shape[0], -1)
    return FeatureMatrix(values, fm.frame_shift_ms * rate_factor,
                         fm.window_ms, 'stacked')

###############################################################################
def majority_vote(labels, rate_factor=3):
    """
    Down-sample a sequence of frame labels: output frame t' takes the most
    frequent label among input frames `rate_factor*t' ... rate_factor*t' +
    rate_factor - 1`. Ties go to the label seen first in the bucket.
    """
    labels = list(labels)
    result = []
    for start in range(0, len(labels), rate_factor):
        bucket = labels[start:start + rate_factor]
        counts = Counter(bucket)
        best   = max(counts.values())
        result.append(next(label for label in bucket if counts[label] == best))
    return result
