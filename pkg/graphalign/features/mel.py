#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Log-mel filterbank features, the input of the recurrent acoustic model.

    >>> from graphalign.features.mel import log_mel
    >>> fm = log_mel(segment)
    >>> fm.values.shape
    (98, 80)
"""

# Third party modules #
import numpy

# Internal modules #
from graphalign.features.framing import power_spectrum
from graphalign.features.matrix import FeatureMatrix

# Constants #
ENERGY_FLOOR = 1e-10

###############################################################################
def hz_to_mel(freq):
    return 2595.0 * numpy.log10(1.0 + numpy.asarray(freq) / 700.0)

def mel_to_hz(mel):
    return 700.0 * (10.0 ** (numpy.asarray(mel) / 2595.0) - 1.0)

def triangular_filters(centers_hz, nfft, sample_rate):
    """
    Triangular filters whose corners are consecutive entries of
    `centers_hz` (n_filters + 2 points), evaluated on the FFT bin frequencies.
    """
    fft_freqs = numpy.arange(nfft // 2 + 1) * sample_rate / nfft
    lower, center, upper = centers_hz[:-2], centers_hz[1:-1], centers_hz[2:]
    rising  = (fft_freqs[None, :] - lower[:, None]) / (center - lower)[:, None]
    falling = (upper[:, None] - fft_freqs[None, :]) / (upper - center)[:, None]
    return numpy.maximum(0.0, numpy.minimum(rising, falling))

def mel_filterbank(n_mels, nfft, sample_rate, low_hz=125.0, high_hz=7600.0):
    """Weights of `n_mels` triangular filters evenly spaced on the mel scale."""
    high_hz = min(high_hz, sample_rate / 2.0)
    mels = numpy.linspace(hz_to_mel(low_hz), hz_to_mel(high_hz), n_mels + 2)
    return triangular_filters(mel_to_hz(mels), nfft, sample_rate)

def log_mel(segment, n_mels=80, window_ms=25.0, shift_ms=10.0, low_hz=125.0,
            high_hz=7600.0, preemphasis=0.97, window_type='hamming'):
    """Natural log of the mel filterbank energies, floored at log(1e-10)."""
    spec, nfft = power_spectrum(segment, window_ms, shift_ms, preemphasis, window_type)
    bank = mel_filterbank(n_mels, nfft, segment.sample_rate, low_hz, high_hz)
    energies = numpy.maximum(spec @ bank.T, ENERGY_FLOOR)
    return FeatureMatrix(numpy.log(energies), shift_ms, window_ms, 'log-mel')
