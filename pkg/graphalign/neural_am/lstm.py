#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Uni-directional LSTM acoustic model with a softmax output layer, written
with numpy so that gradients are explicit and can be checked.

Gates are stored in the order input, forget, cell, output along the last
axis of every layer's weights. Inputs are standardised with a global mean
and standard deviation estimated on the training features and stored with
the parameters.

    >>> from graphalign.neural_am.lstm import RecurrentAm
    >>> am = RecurrentAm.initialize(640, inventory.symbols, layers=2, hidden=64)
    >>> am.forward(stacked).values.sum(axis=1)
"""

# Built-in modules #
from dataclasses import dataclass

# Third party modules #
import numpy
from scipy.special import expit, log_softmax

# Internal modules #
from graphalign.core.errors import DataError, NumericalError

# Constants #
GATES = ('i', 'f', 'g', 'o')
FORGET_BIAS = 1.0

###############################################################################
@dataclass(frozen=True, eq=False)
class PosteriorMatrix:
    """Frames x labels probabilities, every row summing to one."""

    values: numpy.ndarray
    labels: tuple

    def __len__(self): return self.values.shape[0]

    @property
    def log_values(self):
        with numpy.errstate(divide='ignore'):
            return numpy.log(self.values)

###############################################################################
def label_names(symbols, states_mode=1, n_states=3):
    """Symbols as they are, or one label per symbol and HMM state."""
    if states_mode == 1: return tuple(symbols)
    if states_mode == n_states:
        return tuple("%s/%i" % (s, k) for s in symbols for k in range(n_states))
    raise DataError("The label set mode must be 1 or %i, got %s." % (n_states, states_mode))

class RecurrentAm(object):
    """
    Parameters of the network in an ordered dictionary of arrays:
    `layer<n>.wx` (inputs, 4H), `layer<n>.wh` (H, 4H), `layer<n>.b` (4H),
    then `out.w` (H, K) and `out.b` (K).
    """

    def __init__(self, params, symbols, states_mode, input_mean, input_std,
                 n_states=3):
        self.params      = params
        self.symbols     = tuple(symbols)
        self.states_mode = int(states_mode)
        self.n_states    = int(n_states)
        self.input_mean  = numpy.asarray(input_mean, dtype=numpy.float64)
        self.input_std   = numpy.asarray(input_std, dtype=numpy.float64)
        self.labels      = label_names(self.symbols, self.states_mode, self.n_states)
        self.label_index = {l: i for i, l in enumerate(self.labels)}
        if self.params['out.b'].shape[0] != len(self.labels):
            raise DataError("The output layer does not match the label set.")

    def __repr__(self):
        return '%s object: %i x %i LSTM, %i labels' % \
               (self.__class__, self.n_layers, self.hidden, self.n_labels)

    #----------------------------- Properties --------------------------------#
    @property
    def n_layers(self): return sum(1 for k in self.params if k.endswith('.wh'))

    @property
    def hidden(self): return self.params['layer0.wh'].shape[0]

    @property
    def input_dims(self): return self.params['layer0.wx'].shape[0]

    @property
    def n_labels(self): return len(self.labels)

    def label_of(self, symbol, state):
        """Output index of a (symbol, HMM state) pair."""
        if self.states_mode == 1: return self.label_index[symbol]
        return self.label_index["%s/%i" % (symbol, state)]

    def targets_of(self, alignment):
        """Output index of every frame of an alignment."""
        return numpy.array([self.label_of(s, k) for s, k in
                            zip(alignment.symbols, alignment.states)], dtype=numpy.int64)

    #---------------------------- Construction -------------------------------#
    @classmethod
    def initialize(cls, input_dims, symbols, layers=2, hidden=64, states_mode=1,
                   rng=None, zero=False, input_mean=None, input_std=None, n_states=3):
        """
        Weights uniform in +/- 1/sqrt(fan-in), forget gate bias 1.0.
        With `zero` every parameter is zero, giving uniform posteriors.
        """
        if rng is None: rng = numpy.random.default_rng(0)
        n_labels = len(label_names(symbols, states_mode, n_states))
        params = {}
        fan_in = input_dims
        for num in range(layers):
            bound = 1.0 / numpy.sqrt(fan_in + hidden)
            shapes = {'wx': (fan_in, 4 * hidden), 'wh': (hidden, 4 * hidden)}
            for name, shape in shapes.items():
                params['layer%i.%s' % (num, name)] = rng.uniform(-bound, bound, shape)
            bias = numpy.zeros(4 * hidden)
            bias[hidden:2 * hidden] = FORGET_BIAS
            params['layer%i.b' % num] = bias
            fan_in = hidden
        bound = 1.0 / numpy.sqrt(hidden)
        params['out.w'] = rng.uniform(-bound, bound, (hidden, n_labels))
        params['out.b'] = numpy.zeros(n_labels)
        if zero: params = {k: numpy.zeros_like(v) for k, v in params.items()}
        if input_mean is None: input_mean = numpy.zeros(input_dims)
        if input_std is None: input_std = numpy.ones(input_dims)
        return cls(params, symbols, states_mode, input_mean, input_std, n_states)

    def copy(self):
        return self.__class__({k: v.copy() for k, v in self.params.items()},
                              self.symbols, self.states_mode, self.input_mean.copy(),
                              self.input_std.copy(), self.n_states)

    #------------------------------ Forward ----------------------------------#
    def standardize(self, values):
        values = numpy.asarray(values, dtype=numpy.float64)
        if values.shape[-1] != self.input_dims:
            msg = "The model expects %i input dimensions, got %i."
            raise DataError(msg % (self.input_dims, values.shape[-1]))
        return (values - self.input_mean) / self.input_std

    def zero_state(self, batch):
        return [(numpy.zeros((batch, self.hidden)), numpy.zeros((batch, self.hidden)))
                for _ in range(self.n_layers)]

    def forward_batch(self, x, state=None):
        """
        Logits of a standardised (frames, batch, dims) array starting from
        `state`. Returns the logits, the final state of every layer and the
        cache needed by `backward_batch`.
        """
        if state is None: state = self.zero_state(x.shape[1])
        caches, new_state, layer_in = [], [], x
        for num in range(self.n_layers):
            p = 'layer%i.' % num
            hs, cache, last = lstm_layer_forward(layer_in, state[num][0], state[num][1],
                                                 self.params[p + 'wx'], self.params[p + 'wh'],
                                                 self.params[p + 'b'])
            caches.append(cache)
            new_state.append(last)
            layer_in = hs
        logits = layer_in @ self.params['out.w'] + self.params['out.b']
        return logits, new_state, (caches, layer_in)

    def log_posteriors(self, features):
        """Frames x labels log-posteriors of one utterance."""
        values = features.values if hasattr(features, 'values') else features
        x = self.standardize(values)[:, None, :]
        logits, _, _ = self.forward_batch(x)
        result = log_softmax(logits[:, 0, :], axis=1)
        if not numpy.all(numpy.isfinite(result)):
            raise NumericalError("Non-finite posteriors from the acoustic model.")
        return result

    def forward(self, features):
        """Posterior probabilities of every label at every frame."""
        if hasattr(features, 'kind') and features.kind != 'stacked':
            raise DataError("The acoustic model reads stacked features, got '%s'." % features.kind)
        return PosteriorMatrix(numpy.exp(self.log_posteriors(features)), self.labels)

    #------------------------------ Backward ---------------------------------#
    def backward_batch(self, dlogits, cache, mutate_gate=None):
        """
        Gradients of every parameter given the gradient of the loss with
        respect to the logits. `mutate_gate` deliberately corrupts the
        gradient of one gate, used as a negative control.
        """
        caches, top = cache
        grads = {'out.w': numpy.einsum('tbh,tbk->hk', top, dlogits),
                 'out.b': dlogits.sum(axis=(0, 1))}
        dh = dlogits @ self.params['out.w'].T
        for num in reversed(range(self.n_layers)):
            p = 'layer%i.' % num
            dh, dwx, dwh, db = lstm_layer_backward(dh, caches[num], self.params[p + 'wx'],
                                                   self.params[p + 'wh'], mutate_gate)
            grads[p + 'wx'], grads[p + 'wh'], grads[p + 'b'] = dwx, dwh, db
        return grads

###############################################################################
def lstm_layer_forward(x, h0, c0, wx, wh, b):
    """One LSTM layer over a (frames, batch, dims) input."""
    n_frames, batch, _ = x.shape
    hidden = wh.shape[0]
    gates = numpy.empty((n_frames, batch, 4 * hidden))
    cells = numpy.empty((n_frames, batch, hidden))
    hs    = numpy.empty((n_frames, batch, hidden))
    xw = x @ wx + b
    h, c = h0, c0
    for t in range(n_frames):
        z = xw[t] + h @ wh
        act = numpy.empty_like(z)
        act[:, :2 * hidden] = expit(z[:, :2 * hidden])
        act[:, 2 * hidden:3 * hidden] = numpy.tanh(z[:, 2 * hidden:3 * hidden])
        act[:, 3 * hidden:] = expit(z[:, 3 * hidden:])
        i, f = act[:, :hidden], act[:, hidden:2 * hidden]
        g, o = act[:, 2 * hidden:3 * hidden], act[:, 3 * hidden:]
        c = f * c + i * g
        h = o * numpy.tanh(c)
        gates[t], cells[t], hs[t] = act, c, h
    cache = (x, h0, c0, gates, cells, hs)
    return hs, cache, (h, c)

def lstm_layer_backward(dhs, cache, wx, wh, mutate_gate=None):
    """Back-propagation through time over the frames of one layer."""
    x, h0, c0, gates, cells, hs = cache
    n_frames, batch, _ = x.shape
    hidden = wh.shape[0]
    dwx, dwh = numpy.zeros_like(wx), numpy.zeros_like(wh)
    dz_all = numpy.empty_like(gates)
    dh_next = numpy.zeros((batch, hidden))
    dc_next = numpy.zeros((batch, hidden))
    for t in reversed(range(n_frames)):
        act = gates[t]
        i, f = act[:, :hidden], act[:, hidden:2 * hidden]
        g, o = act[:, 2 * hidden:3 * hidden], act[:, 3 * hidden:]
        c_prev = cells[t - 1] if t > 0 else c0
        h_prev = hs[t - 1] if t > 0 else h0
        tanh_c = numpy.tanh(cells[t])
        dh = dhs[t] + dh_next
        dc = dh * o * (1.0 - tanh_c ** 2) + dc_next
        dz = numpy.empty_like(act)
        dz[:, :hidden]              = dc * g * i * (1.0 - i)
        dz[:, hidden:2 * hidden]    = dc * c_prev * f * (1.0 - f)
        dz[:, 2 * hidden:3 * hidden] = dc * i * (1.0 - g ** 2)
        dz[:, 3 * hidden:]          = dh * tanh_c * o * (1.0 - o)
        if mutate_gate is not None:
            k = GATES.index(mutate_gate)
            dz[:, k * hidden:(k + 1) * hidden] *= 1.5
        dz_all[t] = dz
        dwh += h_prev.T @ dz
        dh_next = dz @ wh.T
        dc_next = dc * f
    dwx = numpy.einsum('tbd,tbz->dz', x, dz_all)
    db  = dz_all.sum(axis=(0, 1))
    dx  = dz_all @ wx.T
    return dx, dwx, dwh, db
