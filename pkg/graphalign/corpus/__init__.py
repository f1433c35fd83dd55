#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Dataset ingestion, noise augmentation and the synthetic corpus generator.
"""

# Internal modules #
from graphalign.corpus.audio import AudioSegment, load_dataset, load_noise_bank
from graphalign.corpus.noise import NoiseProfile, sample_snr, augment_noise
from graphalign.corpus.noise import augment_dataset
from graphalign.corpus.synthetic import SyntheticSpec, SyntheticCorpus, generate_synthetic
