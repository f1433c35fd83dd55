#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Cutting a waveform into overlapping windowed frames and taking their power
spectrum. Shared by the log-mel and PLP front-ends.
"""

# Third party modules #
import numpy
from numpy.lib.stride_tricks import sliding_window_view

# Internal modules #
from graphalign.core.errors import DataError

###############################################################################
def ms_to_samples(milliseconds, sample_rate):
    return int(round(milliseconds * sample_rate / 1000.0))

def frame_count(n_samples, window, shift):
    """Number of complete frames, `1 + floor((n - window) / shift)`."""
    if n_samples < window:
        msg = "The segment has %i samples, shorter than one %i sample window."
        raise DataError(msg % (n_samples, window))
    return 1 + (n_samples - window) // shift

def next_power_of_two(n):
    nfft = 1
    while nfft < n: nfft *= 2
    return nfft

def power_spectrum(segment, window_ms=25.0, shift_ms=10.0, preemphasis=0.97,
                   window_type='hamming'):
    """
    Pre-emphasis over the whole signal, framing, windowing and the power
    spectrum `|FFT|^2 / nfft` of every frame.
    Returns the spectrum (frames x nfft/2+1) and the FFT size.
    """
    rate     = segment.sample_rate
    window   = ms_to_samples(window_ms, rate)
    shift    = ms_to_samples(shift_ms, rate)
    n_frames = frame_count(len(segment.samples), window, shift)
    # Pre-emphasis #
    signal = segment.samples
    if preemphasis:
        signal = numpy.append(signal[0], signal[1:] - preemphasis * signal[:-1])
    # Framing #
    frames = sliding_window_view(signal, window)[::shift][:n_frames]
    frames = frames * getattr(numpy, window_type)(window)
    # Spectrum #
    nfft = next_power_of_two(window)
    spec = numpy.abs(numpy.fft.rfft(frames, nfft)) ** 2 / nfft
    return spec, nfft
