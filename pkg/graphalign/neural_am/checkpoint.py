#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Binary checkpoint of a `RecurrentAm`, little endian:

    bytes 0-3   magic b'GAAM'
    uint32      version, layers, hidden, input dims, states mode, HMM states,
                symbol count
    per symbol  uint32 byte length then UTF-8 text
    float64     input mean, input std, then every parameter array in the
                order layer0.wx, layer0.wh, layer0.b, ..., out.w, out.b
"""

# Built-in modules #
from pathlib import Path

# Third party modules #
import numpy

# Internal modules #
from graphalign.core.errors import DataError
from graphalign.neural_am.lstm import RecurrentAm, label_names

# Constants #
MAGIC   = b'GAAM'
VERSION = 1

###############################################################################
def param_shapes(layers, hidden, input_dims, n_labels):
    shapes, fan_in = [], input_dims
    for num in range(layers):
        shapes += [('layer%i.wx' % num, (fan_in, 4 * hidden)),
                   ('layer%i.wh' % num, (hidden, 4 * hidden)),
                   ('layer%i.b' % num, (4 * hidden,))]
        fan_in = hidden
    return shapes + [('out.w', (hidden, n_labels)), ('out.b', (n_labels,))]

def save_checkpoint(am, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = numpy.array([VERSION, am.n_layers, am.hidden, am.input_dims,
                          am.states_mode, am.n_states, len(am.symbols)], dtype='<u4')
    with open(path, 'wb') as handle:
        handle.write(MAGIC)
        handle.write(header.tobytes())
        for symbol in am.symbols:
            raw = symbol.encode('utf-8')
            handle.write(numpy.array([len(raw)], dtype='<u4').tobytes())
            handle.write(raw)
        handle.write(numpy.ascontiguousarray(am.input_mean, dtype='<f8').tobytes())
        handle.write(numpy.ascontiguousarray(am.input_std, dtype='<f8').tobytes())
        for name, _ in param_shapes(am.n_layers, am.hidden, am.input_dims, am.n_labels):
            handle.write(numpy.ascontiguousarray(am.params[name], dtype='<f8').tobytes())
    return path

def load_checkpoint(path):
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise DataError("'%s' is not an acoustic model checkpoint." % path)
    fields = numpy.frombuffer(data, '<u4', 7, 4).tolist()
    version, layers, hidden, input_dims, states_mode, n_states, n_sym = fields
    if version != VERSION:
        msg = "Checkpoint '%s' has version %i, expected %i."
        raise DataError(msg % (path, version, VERSION))
    offset, symbols = 32, []
    for _ in range(n_sym):
        size = int(numpy.frombuffer(data, '<u4', 1, offset)[0])
        symbols.append(data[offset + 4:offset + 4 + size].decode('utf-8'))
        offset += 4 + size
    def take(shape):
        nonlocal offset
        count = int(numpy.prod(shape))
        array = numpy.frombuffer(data, '<f8', count, offset).reshape(shape).copy()
        offset += 8 * count
        return array
    mean, std = take((input_dims,)), take((input_dims,))
    n_labels = len(label_names(symbols, states_mode, n_states))
    params = {name: take(shape) for name, shape in
              param_shapes(layers, hidden, input_dims, n_labels)}
    if offset != len(data):
        raise DataError("Checkpoint '%s' has a wrong size." % path)
    return RecurrentAm(params, symbols, states_mode, mean, std, n_states)
