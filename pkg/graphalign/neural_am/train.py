#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Frame level cross-entropy training of the recurrent acoustic model.

Mini-batches of whole utterances are padded to the same length and cut into
chunks of `chunk_frames` frames. Gradients are back-propagated inside each
chunk only, the LSTM state is carried over to the next chunk, and the
parameters are updated after every chunk with momentum SGD. The learning
rate decays exponentially with the epoch.

    >>> from graphalign.neural_am.train import TrainParams, train_ce
    >>> am, trace = train_ce(am, features, alignments, TrainParams(epochs=10))
"""

# Built-in modules #
from dataclasses import dataclass

# Third party modules #
import numpy
import pandas
from tqdm import tqdm

# Internal modules #
from graphalign.core.errors import DataError, NumericalError
from graphalign.neural_am.checkpoint import save_checkpoint
from graphalign.neural_am.loss import ce_from_logits

###############################################################################
@dataclass(frozen=True)
class TrainParams:
    learning_rate: float = 0.05
    momentum:      float = 0.9
    decay:         float = 0.95
    epochs:        int   = 10
    batch_size:    int   = 8
    chunk_frames:  int   = 20
    clip_norm:     float = 5.0
    seed:          int   = 0
    progress:      bool  = False

def standardization(features):
    """Global mean and standard deviation of a list of feature matrices."""
    every = numpy.vstack([fm.values for fm in features])
    return every.mean(axis=0), numpy.maximum(every.std(axis=0), 1e-8)

def make_examples(am, features, alignments):
    """Pairs of standardised inputs and label indices, one per utterance."""
    examples = []
    for ali in alignments:
        fm = features[ali.utt_id]
        if fm.n_frames != len(ali):
            msg = "Alignment '%s' has %i frames but its features have %i."
            raise DataError(msg % (ali.utt_id, len(ali), fm.n_frames))
        examples.append((am.standardize(fm.values), am.targets_of(ali)))
    if not examples:
        raise DataError("No aligned utterances to train the acoustic model on.")
    return examples

def pad_batch(examples):
    """Stack utterances into (frames, batch, ...) arrays with a frame mask."""
    longest = max(len(y) for _, y in examples)
    dims = examples[0][0].shape[1]
    x = numpy.zeros((longest, len(examples), dims))
    y = numpy.zeros((longest, len(examples)), dtype=numpy.int64)
    mask = numpy.zeros((longest, len(examples)))
    for num, (values, labels) in enumerate(examples):
        x[:len(labels), num], y[:len(labels), num], mask[:len(labels), num] = values, labels, 1.0
    return x, y, mask

def clip_gradients(grads, clip_norm):
    norm = numpy.sqrt(sum(float((g * g).sum()) for g in grads.values()))
    if clip_norm and norm > clip_norm:
        return {k: g * (clip_norm / norm) for k, g in grads.items()}
    return grads

def abort(am, good, checkpoint_path, msg):
    """Restore the last good parameters, keep them on disk and raise."""
    if good is None:
        msg += " No step had a finite loss, no checkpoint was written."
    else:
        am.params.update(good)
        if checkpoint_path is not None: save_checkpoint(am, checkpoint_path)
    raise NumericalError(msg)

###############################################################################
def train_ce(am, features, alignments, params=TrainParams(), checkpoint_path=None):
    """
    Train `am` in place on the utterances of `alignments`, whose frames
    must match the stacked `features` (a dictionary keyed by utterance id).

    Returns the model and the loss trace with columns `step, epoch, ce_loss`,
    the loss being the mean per frame cross-entropy of the chunk.
    On a non-finite loss, or non-finite parameters after the last update,
    `am` is put back to the parameters of the last chunk whose loss was
    finite, these are written to `checkpoint_path` and `NumericalError` is
    raised. Nothing is written when no chunk had a finite loss.
    """
    examples = make_examples(am, features, alignments)
    rng = numpy.random.default_rng(params.seed)
    velocity = {k: numpy.zeros_like(v) for k, v in am.params.items()}
    trace, step, good = [], 0, None
    for epoch in tqdm(range(params.epochs), desc="Epochs", disable=not params.progress):
        rate  = params.learning_rate * params.decay ** epoch
        order = rng.permutation(len(examples))
        for start in range(0, len(order), params.batch_size):
            batch = [examples[i] for i in order[start:start + params.batch_size]]
            x, y, mask = pad_batch(batch)
            state = None
            for c in range(0, x.shape[0], params.chunk_frames):
                sl = slice(c, c + params.chunk_frames)
                n_valid = mask[sl].sum()
                if n_valid == 0: break
                logits, state, cache = am.forward_batch(x[sl], state)
                loss, dlogits = ce_from_logits(logits, y[sl], mask[sl])
                if not numpy.isfinite(loss):
                    msg = "Non-finite cross-entropy at step %i of epoch %i."
                    abort(am, good, checkpoint_path, msg % (step, epoch))
                good = {k: v.copy() for k, v in am.params.items()}
                grads = am.backward_batch(dlogits / n_valid, cache)
                grads = clip_gradients(grads, params.clip_norm)
                for name, grad in grads.items():
                    velocity[name] = params.momentum * velocity[name] - rate * grad
                    am.params[name] += velocity[name]
                trace.append((step, epoch, loss / n_valid))
                step += 1
    if not all(numpy.isfinite(v).all() for v in am.params.values()):
        abort(am, good, checkpoint_path, "Non-finite parameters after step %i." % (step - 1))
    if checkpoint_path is not None: save_checkpoint(am, checkpoint_path)
    return am, pandas.DataFrame(trace, columns=['step', 'epoch', 'ce_loss'])
