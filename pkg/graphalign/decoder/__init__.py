#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Language model, beam search decoding and word error rate scoring.
"""

# Internal modules #
from graphalign.decoder.ngram import NGramLm, train_ngram
from graphalign.decoder.search import beam_decode, beam_search
from graphalign.decoder.scoring import TransliterationMap, wer, transliterated_wer
from graphalign.decoder.scoring import edit_operations, substitution_pairs, score_corpus
