#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Grapheme HMMs with diagonal covariance GMM emissions.

Every symbol of the inventory has `n_states` emitting left-to-right states.
State `k` of symbol number `i` is row `i * n_states + k` of every parameter
array:

    weights      (n_rows, n_mix)
    means        (n_rows, n_mix, dims)
    variances    (n_rows, n_mix, dims)
    transitions  (n_rows, 2)            probabilities of [self loop, advance]

Binary format, little endian: magic b'GAHG', uint32 version, uint32 symbol
count, states, mixtures and dims, then for each symbol a uint32 byte length
and its UTF-8 text, then the four arrays and the variance floor as float64.
"""

# Built-in modules #
from pathlib import Path

# Third party modules #
import numpy
from scipy.special import logsumexp

# Internal modules #
from graphalign.core.errors import DataError

# Constants #
MAGIC   = b'GAHG'
VERSION = 1
LOG_2PI = numpy.log(2.0 * numpy.pi)

###############################################################################
class HmmGmmModel(object):
    """
    Parameters of all the grapheme HMMs.

        >>> model = HmmGmmModel.load("gmm/model.bin")
        >>> model.state_log_likelihoods(features.values)
    """

    def __init__(self, symbols, weights, means, variances, transitions,
                 variance_floor, n_states=3):
        self.symbols        = tuple(symbols)
        self.n_states       = int(n_states)
        self.weights        = numpy.asarray(weights, dtype=numpy.float64)
        self.means          = numpy.asarray(means, dtype=numpy.float64)
        self.variances      = numpy.asarray(variances, dtype=numpy.float64)
        self.transitions    = numpy.asarray(transitions, dtype=numpy.float64)
        self.variance_floor = numpy.asarray(variance_floor, dtype=numpy.float64)
        self.index = {s: i for i, s in enumerate(self.symbols)}
        n_rows = len(self.symbols) * self.n_states
        if self.means.shape[0] != n_rows or self.weights.shape[0] != n_rows:
            msg = "Expected %i states for %i symbols, got %i."
            raise DataError(msg % (n_rows, len(self.symbols), self.means.shape[0]))

    def __repr__(self):
        return '%s object: %i symbols, %i mixtures, %i dims' % \
               (self.__class__, len(self.symbols), self.n_mix, self.dims)

    #----------------------------- Properties --------------------------------#
    @property
    def n_mix(self): return self.weights.shape[1]

    @property
    def dims(self): return self.means.shape[2]

    @property
    def n_rows(self): return self.weights.shape[0]

    def row(self, symbol, state):
        """Row of a (symbol, state) pair in the parameter arrays."""
        if symbol not in self.index:
            raise DataError("The symbol '%s' has no model." % symbol)
        return self.index[symbol] * self.n_states + int(state)

    def rows_of(self, symbols):
        """Rows of the composed left-to-right graph of a symbol sequence."""
        return numpy.array([self.row(s, k) for s in symbols
                            for k in range(self.n_states)], dtype=numpy.int64)

    #------------------------------- Methods ---------------------------------#
    def component_log_likelihoods(self, values, rows=None):
        """
        Log of weight times Gaussian density for every frame, state row and
        mixture component, shape (frames, rows, n_mix). Components with a
        zero weight give -inf.
        """
        rows = numpy.arange(self.n_rows) if rows is None else numpy.asarray(rows)
        x    = numpy.asarray(values, dtype=numpy.float64)
        mu   = self.means[rows]
        var  = self.variances[rows]
        const = -0.5 * (self.dims * LOG_2PI + numpy.log(var).sum(axis=2))
        # Expand (x - mu)^2 / var without a (frames, rows, mix, dims) array #
        inv  = 1.0 / var
        quad = (x * x) @ inv.reshape(-1, self.dims).T
        quad -= 2.0 * x @ (mu * inv).reshape(-1, self.dims).T
        quad += (mu * mu * inv).sum(axis=2).reshape(-1)
        quad  = quad.reshape(x.shape[0], len(rows), self.n_mix)
        with numpy.errstate(divide='ignore'):
            log_w = numpy.log(self.weights[rows])
        return log_w[None] + const[None] - 0.5 * quad

    def state_log_likelihoods(self, values, rows=None):
        """Emission log-likelihood of every frame in every state row."""
        return logsumexp(self.component_log_likelihoods(values, rows), axis=2)

    @property
    def log_transitions(self):
        with numpy.errstate(divide='ignore'):
            return numpy.log(self.transitions)

    def copy(self):
        return HmmGmmModel(self.symbols, self.weights.copy(), self.means.copy(),
                           self.variances.copy(), self.transitions.copy(),
                           self.variance_floor.copy(), self.n_states)

    def save(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        header = numpy.array([VERSION, len(self.symbols), self.n_states,
                              self.n_mix, self.dims], dtype='<u4')
        with open(path, 'wb') as handle:
            handle.write(MAGIC)
            handle.write(header.tobytes())
            for symbol in self.symbols:
                raw = symbol.encode('utf-8')
                handle.write(numpy.array([len(raw)], dtype='<u4').tobytes())
                handle.write(raw)
            for array in (self.weights, self.means, self.variances,
                          self.transitions, self.variance_floor):
                handle.write(numpy.ascontiguousarray(array, dtype='<f8').tobytes())
        return path

    @classmethod
    def load(cls, path):
        data = Path(path).read_bytes()
        if data[:4] != MAGIC:
            raise DataError("'%s' is not a GMM model file." % path)
        version, n_sym, n_states, n_mix, dims = numpy.frombuffer(data, '<u4', 5, 4).tolist()
        if version != VERSION:
            msg = "GMM model '%s' has version %i, expected %i."
            raise DataError(msg % (path, version, VERSION))
        offset, symbols = 24, []
        for _ in range(n_sym):
            size = int(numpy.frombuffer(data, '<u4', 1, offset)[0])
            symbols.append(data[offset + 4:offset + 4 + size].decode('utf-8'))
            offset += 4 + size
        rows = n_sym * n_states
        shapes = [(rows, n_mix), (rows, n_mix, dims), (rows, n_mix, dims),
                  (rows, 2), (dims,)]
        arrays = []
        for shape in shapes:
            count = int(numpy.prod(shape))
            arrays.append(numpy.frombuffer(data, '<f8', count, offset).reshape(shape).copy())
            offset += 8 * count
        if offset != len(data):
            raise DataError("GMM model file '%s' has a wrong size." % path)
        return cls(symbols, *arrays, n_states=n_states)
