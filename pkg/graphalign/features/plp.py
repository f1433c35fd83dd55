#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Perceptual linear prediction cepstra with deltas and delta-deltas, the
features of the GMM flat start.

Steps per frame: power spectrum, bark-spaced critical band integration,
equal loudness pre-emphasis, cube-root intensity to loudness compression,
all-pole model of order 12 fitted on the auditory spectrum, conversion of the
predictor to 13 cepstra and liftering.
"""

# Third party modules #
import numpy
from scipy.linalg import solve_toeplitz

# Internal modules #
from graphalign.features.framing import power_spectrum
from graphalign.features.matrix import FeatureMatrix
from graphalign.features.mel import ENERGY_FLOOR, triangular_filters

###############################################################################
def hz_to_bark(freq):
    return 7.0 * numpy.arcsinh(numpy.asarray(freq) / 650.0)

def bark_to_hz(bark):
    return 650.0 * numpy.sinh(numpy.asarray(bark) / 7.0)

def bark_filterbank(nfft, sample_rate, min_hz=20.0):
    """One triangular critical band filter per bark up to the Nyquist frequency."""
    max_hz  = sample_rate / 2.0
    n_bands = int(numpy.ceil(hz_to_bark(max_hz))) + 1
    barks   = numpy.linspace(hz_to_bark(min_hz), hz_to_bark(max_hz), n_bands + 2)
    return triangular_filters(bark_to_hz(barks), nfft, sample_rate), bark_to_hz(barks[1:-1])

def equal_loudness(band_hz):
    """Approximation of the sensitivity of human hearing at 40 dB."""
    fsq = band_hz ** 2
    return (fsq / (fsq + 1.6e5)) ** 2 * ((fsq + 1.44e6) / (fsq + 9.61e6))

def auditory_spectrum(spec, nfft, sample_rate):
    """Critical band energies, loudness weighted and cube-root compressed."""
    bank, band_hz = bark_filterbank(nfft, sample_rate)
    bands = numpy.maximum(spec @ bank.T, ENERGY_FLOOR)
    bands = (bands * equal_loudness(band_hz)) ** (1.0 / 3.0)
    # The first and last bands are unreliable, copy their neighbours #
    bands[:, 0]  = bands[:, 1]
    bands[:, -1] = bands[:, -2]
    return numpy.maximum(bands, ENERGY_FLOOR)

def lpc_from_spectrum(bands, order=12):
    """
    All-pole fit of a power spectrum. The autocorrelation is the inverse
    FFT of the spectrum and the normal equations are solved with
    Levinson-Durbin (`solve_toeplitz`).
    Returns polynomial coefficients `[1, -a_1 ... -a_p]` and the residual gain
    for every frame.
    """
    autocorr = numpy.fft.irfft(bands, axis=1)[:, :order + 1]
    polys = numpy.zeros((bands.shape[0], order + 1))
    gains = numpy.zeros(bands.shape[0])
    for i, r in enumerate(autocorr):
        r = r.copy()
        r[0] *= 1.0 + 1e-9
        try:
            a = solve_toeplitz(r[:order], r[1:order + 1])
        except numpy.linalg.LinAlgError:
            a = numpy.zeros(order)
        if not numpy.all(numpy.isfinite(a)): a = numpy.zeros(order)
        polys[i, 0]  = 1.0
        polys[i, 1:] = -a
        gains[i] = max(r[0] - a @ r[1:order + 1], ENERGY_FLOOR)
    return polys, gains

def lpc_to_cepstrum(polys, gains, n_ceps=13):
    """Cepstra of the all-pole model `gain / A(z)`, c_0 being the log gain."""
    order = polys.shape[1] - 1
    a = polys[:, 1:]
    ceps = numpy.zeros((polys.shape[0], n_ceps))
    ceps[:, 0] = numpy.log(gains)
    for n in range(1, n_ceps):
        acc = -a[:, n - 1] if n <= order else numpy.zeros(polys.shape[0])
        for k in range(1, n):
            if n - k <= order:
                acc = acc - (k / n) * ceps[:, k] * a[:, n - k - 1]
        ceps[:, n] = acc
    return ceps

def lifter(ceps, exponent=0.6):
    """Boost higher cepstra by `n ** exponent`."""
    weights = numpy.arange(ceps.shape[1], dtype=numpy.float64) ** exponent
    weights[0] = 1.0
    return ceps * weights

def compute_deltas(values, width=2):
    """
    Regression deltas over a +/- `width` frame window, edges replicated:
    d_t = sum_n n (c_{t+n} - c_{t-n}) / (2 sum_n n^2).
    """
    values = numpy.asarray(values, dtype=numpy.float64)
    padded = numpy.pad(values, ((width, width), (0, 0)), mode='edge')
    n_frames = values.shape[0]
    num = numpy.zeros_like(values)
    for n in range(1, width + 1):
        num += n * (padded[width + n:width + n + n_frames] -
                    padded[width - n:width - n + n_frames])
    return num / (2.0 * sum(n * n for n in range(1, width + 1)))

def plp_cepstra(segment, n_ceps=13, order=12, window_ms=25.0, shift_ms=10.0,
                preemphasis=0.97, window_type='hamming'):
    """The base PLP cepstra, frames x n_ceps."""
    spec, nfft = power_spectrum(segment, window_ms, shift_ms, preemphasis, window_type)
    bands = auditory_spectrum(spec, nfft, segment.sample_rate)
    polys, gains = lpc_from_spectrum(bands, order)
    return lifter(lpc_to_cepstrum(polys, gains, n_ceps))

def plp_with_deltas(segment, n_ceps=13, order=12, window_ms=25.0, shift_ms=10.0,
                    preemphasis=0.97, window_type='hamming'):
    """13 PLP cepstra, 13 deltas and 13 delta-deltas."""
    base   = plp_cepstra(segment, n_ceps, order, window_ms, shift_ms,
                         preemphasis, window_type)
    delta  = compute_deltas(base)
    delta2 = compute_deltas(delta)
    values = numpy.hstack([base, delta, delta2])
    return FeatureMatrix(values, shift_ms, window_ms, 'plp')
