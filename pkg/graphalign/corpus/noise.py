#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Additive noise augmentation at a controlled signal to noise ratio.

The SNR of each noisy copy is drawn from a Beta distribution with
concentration 5 stretched over [snr_low, snr_high] and placed so that its mean
is `snr_mean`. With the default bounds 0 dB and 30 dB and a 12 dB mean this is
exactly Beta(2, 3) scaled by 30.

    >>> import numpy
    >>> from graphalign.corpus.noise import NoiseProfile, sample_snr
    >>> profile = NoiseProfile(noise_bank=())
    >>> sample_snr(numpy.random.default_rng(0), profile)
"""

# Built-in modules #
from dataclasses import dataclass

# Third party modules #
import numpy

# Internal modules #
from graphalign.core.errors import ConfigError, DataError
from graphalign.core.parallel import utterance_rng

# Constants #
BETA_CONCENTRATION = 5.0

###############################################################################
@dataclass(frozen=True)
class NoiseProfile:
    """A bank of noise recordings and the SNR range to mix them at."""

    noise_bank: tuple
    snr_low:    float = 0.0
    snr_high:   float = 30.0
    snr_mean:   float = 12.0

    def __post_init__(self):
        if not self.snr_low <= self.snr_mean <= self.snr_high:
            msg = "The SNR bounds must satisfy low <= mean <= high," \
                  " got %s <= %s <= %s."
            raise ConfigError(msg % (self.snr_low, self.snr_mean, self.snr_high))
        object.__setattr__(self, 'noise_bank', tuple(self.noise_bank))

    @property
    def beta_parameters(self):
        """The (a, b) shape parameters of the unscaled Beta distribution."""
        width = self.snr_high - self.snr_low
        if width == 0: return None
        fraction = (self.snr_mean - self.snr_low) / width
        if fraction <= 0 or fraction >= 1: return None
        a = BETA_CONCENTRATION * fraction
        return a, BETA_CONCENTRATION - a

###############################################################################
def sample_snr(rng, profile):
    """Draw one SNR in dB, always within [snr_low, snr_high]."""
    params = profile.beta_parameters
    # Degenerate interval or mean on a bound #
    if params is None: return float(profile.snr_mean)
    value = rng.beta(*params)
    width = profile.snr_high - profile.snr_low
    return float(min(profile.snr_high, profile.snr_low + width * value))

def signal_power(samples):
    """Mean power of a waveform."""
    samples = numpy.asarray(samples, dtype=numpy.float64)
    return float(numpy.mean(samples * samples))

def measure_snr(signal, noise):
    """SNR in dB between two waveforms of the same length."""
    return 10.0 * numpy.log10(signal_power(signal) / signal_power(noise))

def mix_at_snr(signal, noise, target_snr):
    """
    Scale `noise` so that the mixture has the requested SNR and add it to
    `signal`. The noise is tiled cyclically when shorter than the signal.
    If the mixture would clip, both components are scaled down by the peak.
    Returns the mixture and the two components it is made of.
    """
    signal = numpy.asarray(signal, dtype=numpy.float64)
    noise  = numpy.resize(numpy.asarray(noise, dtype=numpy.float64), signal.shape)
    p_signal, p_noise = signal_power(signal), signal_power(noise)
    if p_signal == 0 or p_noise == 0:
        raise DataError("The SNR is undefined for a zero power signal or noise.")
    gain  = numpy.sqrt(p_signal / (p_noise * 10.0 ** (target_snr / 10.0)))
    noise = gain * noise
    mixed = signal + noise
    peak  = numpy.max(numpy.abs(mixed))
    if peak > 1.0:
        mixed, signal, noise = mixed / peak, signal / peak, noise / peak
    return mixed, signal, noise

def augment_noise(segment, noise, target_snr):
    """Noisy copy of an audio segment at the target SNR in dB."""
    if segment.sample_rate != noise.sample_rate:
        msg = "Cannot mix '%s' at %i Hz with noise '%s' at %i Hz."
        raise DataError(msg % (segment.id, segment.sample_rate,
                               noise.id, noise.sample_rate))
    mixed, _, _ = mix_at_snr(segment.samples, noise.samples, target_snr)
    return segment.replace(samples=mixed)

def augment_dataset(dataset, profile, copies, seed):
    """
    Append `copies` noisy versions after every clean utterance. Each copy
    draws its noise recording and its SNR from a generator private to the
    copy, so the result does not depend on processing order.
    """
    if copies <= 0: return list(dataset)
    if not profile.noise_bank:
        raise ConfigError("Noise augmentation is enabled but the noise bank is empty.")
    result = []
    for segment in dataset:
        result.append(segment)
        for num in range(copies):
            copy_id = "%s_noise%i" % (segment.id, num)
            rng     = utterance_rng(seed, copy_id)
            noise   = profile.noise_bank[rng.integers(len(profile.noise_bank))]
            snr     = sample_snr(rng, profile)
            noisy   = augment_noise(segment, noise, snr)
            result.append(noisy.replace(id=copy_id))
    return result
