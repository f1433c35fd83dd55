#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Feature matrices and their binary cache container.

Container layout, all little endian:

    bytes 0-3    magic b'GAFM'
    uint32       version (1)
    uint32       kind code (0 log-mel, 1 plp, 2 stacked)
    uint32       number of frames
    uint32       number of dimensions
    float32      frame shift in milliseconds
    float32      window length in milliseconds
    float32[]    values, frames x dims, row-major
"""

# Built-in modules #
from dataclasses import dataclass
from pathlib import Path

# Third party modules #
import numpy

# Internal modules #
from graphalign.core.errors import DataError, NumericalError

# Constants #
MAGIC   = b'GAFM'
VERSION = 1
KINDS   = ('log-mel', 'plp', 'stacked')
HEADER_BYTES = 4 + 4 * 4 + 2 * 4

###############################################################################
@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Frames x dims acoustic features with their frame rate metadata."""

    values:         numpy.ndarray
    frame_shift_ms: float
    window_ms:      float
    kind:           str

    def __post_init__(self):
        values = numpy.asarray(self.values, dtype=numpy.float64)
        if values.ndim != 2 or values.shape[0] < 1:
            raise DataError("A feature matrix needs at least one frame.")
        if self.kind not in KINDS:
            raise DataError("Unknown feature kind '%s'." % self.kind)
        if not numpy.all(numpy.isfinite(values)):
            raise NumericalError("Feature matrix of kind '%s' has non-finite values." % self.kind)
        object.__setattr__(self, 'values', values)

    def __repr__(self):
        return '%s object %s %ix%i @%gms' % (self.__class__, self.kind,
                                             self.n_frames, self.dims,
                                             self.frame_shift_ms)

    def __len__(self): return self.n_frames

    @property
    def n_frames(self): return self.values.shape[0]

    @property
    def dims(self): return self.values.shape[1]

    #------------------------------- Methods ---------------------------------#
    def save(self, path):
        """Write the matrix to the binary container."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        ints   = numpy.array([VERSION, KINDS.index(self.kind),
                              self.n_frames, self.dims], dtype='<u4')
        floats = numpy.array([self.frame_shift_ms, self.window_ms], dtype='<f4')
        body   = numpy.ascontiguousarray(self.values, dtype='<f4')
        with open(path, 'wb') as handle:
            handle.write(MAGIC)
            handle.write(ints.tobytes())
            handle.write(floats.tobytes())
            handle.write(body.tobytes())
        return path

    @classmethod
    def load(cls, path):
        """Read a matrix written by `save`."""
        data = Path(path).read_bytes()
        if data[:4] != MAGIC:
            raise DataError("'%s' is not a feature container." % path)
        version, kind, frames, dims = numpy.frombuffer(data, '<u4', 4, 4)
        if version != VERSION:
            msg = "Feature container '%s' has version %i, expected %i."
            raise DataError(msg % (path, version, VERSION))
        shift, window = numpy.frombuffer(data, '<f4', 2, 20)
        if len(data) != HEADER_BYTES + 4 * int(frames) * int(dims):
            raise DataError("Feature container '%s' is truncated." % path)
        values = numpy.frombuffer(data, '<f4', int(frames) * int(dims), HEADER_BYTES)
        return cls(values.reshape(int(frames), int(dims)),
                   float(shift), float(window), KINDS[int(kind)])
