#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Consistency checks of alignments and GMM models. Each check raises on the
first problem found and returns True otherwise.
"""

# Third party modules #
import numpy

# Internal modules #
from graphalign import RESERVED_SYMBOLS
from graphalign.core.errors import DataError, NumericalError

###############################################################################
def check_alignment(alignment, targets=None, n_states=3):
    """
    States in range and monotone inside every symbol instance, reserved
    symbols outside of any word, word indices never decreasing and,
    when `targets` is given, the symbol instances spelling the targets.
    """
    alignment.validate(targets, n_states)
    reserved = numpy.array([s in RESERVED_SYMBOLS for s in alignment.symbols], dtype=bool)
    if numpy.any(alignment.words[reserved] != -1):
        msg = "Alignment '%s' puts a reserved symbol inside a word."
        raise DataError(msg % alignment.utt_id)
    if numpy.any(alignment.words[~reserved] < 0):
        msg = "Alignment '%s' has graphemes outside of any word."
        raise DataError(msg % alignment.utt_id)
    inside = alignment.words[~reserved]
    if numpy.any(numpy.diff(inside) < 0):
        msg = "Alignment '%s' has word indices going backwards."
        raise DataError(msg % alignment.utt_id)
    return True

def check_model(model, tolerance=1e-6):
    """Finite parameters, stochastic weights, floored variances, valid transitions."""
    arrays = {'weights': model.weights, 'means': model.means,
              'variances': model.variances, 'transitions': model.transitions}
    for name, values in arrays.items():
        if not numpy.all(numpy.isfinite(values)):
            raise NumericalError("The GMM has non-finite %s." % name)
    if numpy.any(model.weights < 0):
        raise DataError("The GMM has negative mixture weights.")
    sums = model.weights.sum(axis=1)
    bad = numpy.flatnonzero(numpy.abs(sums - 1.0) > tolerance)
    if len(bad):
        msg = "The mixture weights of %i states do not sum to one, first is row %i (%g)."
        raise DataError(msg % (len(bad), bad[0], sums[bad[0]]))
    used = model.weights > 0
    floor = numpy.broadcast_to(model.variance_floor, model.variances.shape)
    if numpy.any(model.variances[used] < floor[used] * (1 - tolerance)):
        raise DataError("The GMM has variances below the variance floor.")
    if numpy.any(model.transitions <= 0) or numpy.any(model.transitions >= 1):
        raise DataError("The GMM has transition probabilities outside of (0, 1).")
    if not numpy.allclose(model.transitions.sum(axis=1), 1.0, atol=tolerance):
        raise DataError("The GMM transition rows do not sum to one.")
    return True
