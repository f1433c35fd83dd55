#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Expectation Maximization of the state GMMs on fixed (hard) alignments.

The frames aligned to each state are pooled over the whole dataset and a
GMM is fitted to them. Mixtures are grown by binary splitting, 1, 2, 4, 8
then the target count, running `em_iters_per_split` EM updates after each
split. The transition probabilities are the count ratios of the
alignments.

    >>> from graphalign.hmm_gmm.em import train_em
    >>> model, history = train_em(features, alignments, inventory.symbols)
"""

# Built-in modules #
import warnings
from collections import defaultdict

# Third party modules #
import numpy
import pandas
from scipy.special import logsumexp

# Internal modules #
from graphalign.core.errors import DataError, NumericalError
from graphalign.hmm_gmm.model import HmmGmmModel

# Constants #
SPLIT_PERTURBATION = 0.1
TRANSITION_FLOOR   = 1e-3
EMPTY_STATE_INFLATION = 2.0

###############################################################################
def split_schedule(target_mixtures):
    """Mixture counts visited: powers of two below the target, then the target."""
    if target_mixtures < 1:
        raise DataError("The mixture count must be positive.")
    schedule, count = [], 1
    while count < target_mixtures:
        schedule.append(count)
        count *= 2
    return schedule + [target_mixtures]

def next_mixture_count(current, target_mixtures):
    """The step of the split schedule that follows `current`, capped at the target."""
    if target_mixtures is None or target_mixtures <= current: return current
    return min(m for m in split_schedule(target_mixtures) if m > current)

def split_largest(weights, means, variances, n_new):
    """
    Grow one GMM to `n_new` components by repeatedly splitting the component
    with the largest weight, its mean moved by +/- 0.1 standard deviation.
    """
    weights, means, variances = list(weights), list(means), list(variances)
    while len(weights) < n_new:
        k = int(numpy.argmax(weights))
        offset = SPLIT_PERTURBATION * numpy.sqrt(variances[k])
        weights[k] /= 2.0
        weights.append(weights[k])
        means.append(means[k] + offset)
        means[k] = means[k] - offset
        variances.append(variances[k].copy())
    return numpy.array(weights), numpy.array(means), numpy.array(variances)

###############################################################################
def gmm_log_likelihood(x, weights, means, variances):
    """Per frame, per component log of weight times density."""
    dims = x.shape[1]
    with numpy.errstate(divide='ignore'):
        log_w = numpy.log(weights)
    diff = x[:, None, :] - means[None, :, :]
    quad = (diff * diff / variances[None]).sum(axis=2)
    const = -0.5 * (dims * numpy.log(2.0 * numpy.pi) + numpy.log(variances).sum(axis=1))
    return log_w[None] + const[None] - 0.5 * quad

def em_step(x, weights, means, variances, floor):
    """
    One EM update of a diagonal GMM. Returns the new parameters and the
    log-likelihood of `x` under the old ones. Components that receive no
    responsibility keep their parameters with a zero weight.
    """
    comp  = gmm_log_likelihood(x, weights, means, variances)
    total = logsumexp(comp, axis=1)
    ll = float(total.sum())
    if not numpy.isfinite(ll):
        raise NumericalError("Non-finite log-likelihood during EM.")
    resp = numpy.exp(comp - total[:, None])
    occupancy = resp.sum(axis=0)
    new_w, new_mu, new_var = weights.copy(), means.copy(), variances.copy()
    for k in numpy.flatnonzero(occupancy > 0):
        r = resp[:, k]
        mu = r @ x / occupancy[k]
        diff = x - mu
        new_mu[k]  = mu
        new_var[k] = numpy.maximum(r @ (diff * diff) / occupancy[k], floor)
    new_w = occupancy / occupancy.sum()
    return new_w, new_mu, new_var, ll

def gmm_total_log_likelihood(x, weights, means, variances):
    return float(logsumexp(gmm_log_likelihood(x, weights, means, variances), axis=1).sum())

###############################################################################
def pool_frames(features, alignments, model_rows):
    """Frames of the dataset grouped by state row, in dataset order."""
    pooled = defaultdict(list)
    for ali in alignments:
        fm = features[ali.utt_id]
        if fm.n_frames != len(ali):
            msg = "Alignment '%s' has %i frames but its features have %i."
            raise DataError(msg % (ali.utt_id, len(ali), fm.n_frames))
        rows = numpy.array([model_rows[s] for s in ali.symbols]) + ali.states
        for row in numpy.unique(rows):
            pooled[int(row)].append(fm.values[rows == row])
    return {row: numpy.vstack(chunks) for row, chunks in pooled.items()}

def count_transitions(alignments, model_rows, n_rows):
    """
    Self-loop and advance counts of every state row, counting only the
    transitions taken between frames of the same utterance.
    """
    counts = numpy.zeros((n_rows, 2))
    for ali in alignments:
        if len(ali) < 2: continue
        rows = numpy.array([model_rows[s] for s in ali.symbols]) + ali.states
        advanced = ali.boundaries[1:] | (ali.states[1:] != ali.states[:-1])
        numpy.add.at(counts, (rows[:-1], advanced.astype(int)), 1)
    return counts

def estimate_transitions(counts, previous):
    """Count ratios clipped to [floor, 1-floor], unvisited states keep `previous`."""
    totals = counts.sum(axis=1)
    result = previous.copy()
    seen = totals > 0
    p_self = numpy.clip(counts[seen, 0] / totals[seen], TRANSITION_FLOOR, 1 - TRANSITION_FLOOR)
    result[seen, 0] = p_self
    result[seen, 1] = 1.0 - p_self
    return result

###############################################################################
def train_em(features, alignments, symbols, target_mixtures=14,
             em_iters_per_split=4, variance_floor_ratio=1e-3, n_states=3,
             init_model=None):
    """
    Train the HMM-GMM on fixed alignments.

    * `features` maps utterance ids to `FeatureMatrix` objects.
    * `alignments` is a list of `FrameAlignment`, one per used utterance.
    * `init_model` continues EM from an existing model, states without
      frames then keep their parameters. Its components are split up to
      `target_mixtures` if that is larger than its mixture count, EM then
      only runs at the new count.

    Returns the model and a data frame with one row per EM pass:
    `mixtures, iteration, log_likelihood`. Iteration 0 is the
    log-likelihood right after a split.
    """
    symbols = tuple(symbols)
    n_rows  = len(symbols) * n_states
    model_rows = {s: i * n_states for i, s in enumerate(symbols)}
    pooled = pool_frames(features, alignments, model_rows)
    if not pooled:
        raise DataError("No aligned frames to train the GMM on.")
    # Global statistics #
    every = numpy.vstack(list(pooled.values()))
    global_mean = every.mean(axis=0)
    global_var  = every.var(axis=0)
    floor = numpy.maximum(variance_floor_ratio * global_var, 1e-12)
    dims  = every.shape[1]
    # Starting point #
    if init_model is not None:
        if init_model.symbols != symbols:
            raise DataError("The initial model was trained on other symbols.")
        n_start     = init_model.n_mix
        schedule    = [m for m in split_schedule(max(target_mixtures, n_start))
                       if m > n_start] or [n_start]
        floor       = init_model.variance_floor.copy()
        # Unused columns are filled with the first component at zero weight #
        pad         = [0] * (schedule[-1] - n_start)
        columns     = list(range(n_start)) + pad
        weights     = init_model.weights[:, columns].copy()
        weights[:, n_start:] = 0.0
        means       = init_model.means[:, columns].copy()
        variances   = init_model.variances[:, columns].copy()
        transitions = init_model.transitions.copy()
    else:
        schedule    = split_schedule(target_mixtures)
        weights     = numpy.zeros((n_rows, target_mixtures))
        weights[:, 0] = 1.0
        means       = numpy.tile(global_mean, (n_rows, target_mixtures, 1))
        variances   = numpy.tile(global_var, (n_rows, target_mixtures, 1))
        transitions = numpy.full((n_rows, 2), 0.5)
    # Empty states #
    for row in range(n_rows):
        if row in pooled or init_model is not None: continue
        msg = "State %i of '%s' has no aligned frames, it gets the global Gaussian."
        warnings.warn(msg % (row % n_states, symbols[row // n_states]))
        variances[row] = numpy.maximum(EMPTY_STATE_INFLATION * global_var, floor)
    # Grow and train every state #
    history = []
    for row, x in sorted(pooled.items()):
        n_mix = 1 if init_model is None else init_model.n_mix
        w, mu, var = weights[row, :n_mix], means[row, :n_mix], variances[row, :n_mix]
        for mixtures in schedule:
            if mixtures > len(w): w, mu, var = split_largest(w, mu, var, mixtures)
            for iteration in range(em_iters_per_split):
                w, mu, var, ll = em_step(x, w, mu, var, floor)
                history.append((row, mixtures, iteration, ll))
            history.append((row, mixtures, em_iters_per_split,
                            gmm_total_log_likelihood(x, w, mu, var)))
        size = len(w)
        weights[row, :size], means[row, :size], variances[row, :size] = w, mu, var
        weights[row, size:] = 0.0
    # Transitions #
    counts = count_transitions(alignments, model_rows, n_rows)
    transitions = estimate_transitions(counts, transitions)
    model = HmmGmmModel(symbols, weights, means, variances, transitions, floor, n_states)
    # Sum the per-state likelihoods of each pass #
    df = pandas.DataFrame(history, columns=['row', 'mixtures', 'iteration', 'log_likelihood'])
    df = df.groupby(['mixtures', 'iteration'], sort=True)['log_likelihood'].sum().reset_index()
    if not numpy.all(numpy.isfinite(df['log_likelihood'])):
        raise NumericalError("Non-finite log-likelihood in the EM history.")
    return model, df
