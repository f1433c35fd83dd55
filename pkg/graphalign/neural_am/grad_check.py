#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Compare the analytic gradients of the cross-entropy with central finite
differences on a random subset of parameters.

    >>> am = RecurrentAm.initialize(8, ['a', 'b', 'c'], layers=2, hidden=16)
    >>> grad_check(am, x, targets)
    3.1e-09
"""

# Built-in modules #
import warnings

# Third party modules #
import numpy

# Internal modules #
from graphalign.neural_am.loss import ce_from_logits

###############################################################################
def sample_loss(am, x, targets):
    """Summed cross-entropy of one standardised utterance."""
    mask = numpy.ones((len(targets), 1))
    logits, _, cache = am.forward_batch(x[:, None, :])
    loss, dlogits = ce_from_logits(logits, targets[:, None], mask)
    return loss, dlogits, cache

def relative_error(analytic, numeric):
    return abs(analytic - numeric) / max(abs(analytic) + abs(numeric), 1e-5)

def grad_check(am, values, targets, n_params=200, step=1e-5, seed=0,
               mutate_gate=None):
    """
    Maximum relative error between analytic and numeric gradients over
    `n_params` coordinates drawn uniformly from all parameters.
    `mutate_gate` (one of 'i', 'f', 'g', 'o') corrupts the analytic
    gradient of that gate.
    """
    if n_params <= 0:
        warnings.warn("Gradient check over an empty parameter subset, reporting 0.")
        return 0.0
    x = am.standardize(values)
    targets = numpy.asarray(targets, dtype=numpy.int64)
    _, dlogits, cache = sample_loss(am, x, targets)
    grads = am.backward_batch(dlogits, cache, mutate_gate)
    # Random coordinates across every parameter array #
    rng = numpy.random.default_rng(seed)
    names = sorted(am.params)
    sizes = numpy.array([am.params[n].size for n in names])
    picks = rng.choice(sizes.sum(), size=min(n_params, sizes.sum()), replace=False)
    bounds = numpy.cumsum(sizes)
    worst = 0.0
    for flat in picks:
        which = int(numpy.searchsorted(bounds, flat, side='right'))
        name = names[which]
        index = numpy.unravel_index(flat - (bounds[which] - sizes[which]), am.params[name].shape)
        original = am.params[name][index]
        am.params[name][index] = original + step
        plus, _, _ = sample_loss(am, x, targets)
        am.params[name][index] = original - step
        minus, _, _ = sample_loss(am, x, targets)
        am.params[name][index] = original
        numeric = (plus - minus) / (2.0 * step)
        worst = max(worst, relative_error(grads[name][index], numeric))
    return worst
