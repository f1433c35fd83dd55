#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Grapheme inventory and graphemic lexicon built from transcripts alone.
"""

# Internal modules #
from graphalign.lexicon.inventory import GraphemeInventory, build_inventory
from graphalign.lexicon.inventory import filter_utterances, transcript_to_symbols
from graphalign.lexicon.inventory import transcript_to_targets, symbols_to_words
from graphalign.lexicon.lexicon import GraphemicLexicon, build_lexicon
