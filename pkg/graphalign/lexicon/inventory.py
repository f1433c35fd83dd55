#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
The grapheme inventory is built from the transcripts alone. A grapheme is an
extended grapheme cluster, so a consonant with its vowel sign or virama is
one unit.

    >>> from graphalign.lexicon.inventory import build_inventory
    >>> inventory = build_inventory(["go on"] * 10)
    >>> inventory.symbols
    ('<space>', '<sil>', 'g', 'n', 'o')

The inventory is stored as UTF-8 text with one symbol per line.
"""

# Built-in modules #
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

# Third party modules #
import regex

# Internal modules #
from graphalign import SPACE, SIL, RESERVED_SYMBOLS
from graphalign.core.errors import DataError

# Constants #
GRAPHEME = regex.compile(r'\X')

# Unicode general categories making up each exclusion class #
EXCLUSION_CLASSES = {
    'emoji':       ('So', 'Sk', 'Cs', 'Co'),
    'control':     ('Cc', 'Cf', 'Cn'),
    'punctuation': ('Pc', 'Pd', 'Ps', 'Pe', 'Pi', 'Pf', 'Po'),
    'digit':       ('Nd', 'Nl', 'No'),
    'math':        ('Sm', 'Sc'),
}
DEFAULT_EXCLUSIONS = ('emoji', 'control', 'punctuation')
DEFAULT_KEEP = ("'", '-')

###############################################################################
def split_graphemes(word):
    """The extended grapheme clusters of a string."""
    return GRAPHEME.findall(word)

def grapheme_class(grapheme):
    """The exclusion class of a grapheme, judged by its first code point."""
    category = unicodedata.category(grapheme[0])
    for name, categories in EXCLUSION_CLASSES.items():
        if category in categories: return name
    return None

def is_excluded(grapheme, exclusion_classes=DEFAULT_EXCLUSIONS, keep=DEFAULT_KEEP):
    if grapheme in keep: return False
    return grapheme_class(grapheme) in exclusion_classes

def count_graphemes(transcripts):
    """Occurrence count of every grapheme, whitespace not included."""
    counts = Counter()
    for transcript in transcripts:
        for word in transcript.split():
            counts.update(split_graphemes(word))
    return counts

###############################################################################
@dataclass(frozen=True)
class GraphemeInventory:
    """
    Ordered symbols: the reserved symbols first, then the graphemes sorted
    by code point. `counts` holds the training occurrences of each grapheme.
    """

    symbols: tuple
    counts:  dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if len(set(symbols)) != len(symbols):
            raise DataError("The inventory contains duplicate symbols.")
        if symbols.count(SPACE) != 1:
            raise DataError("The inventory must contain '%s' exactly once." % SPACE)
        object.__setattr__(self, 'symbols', symbols)
        object.__setattr__(self, 'index', {s: i for i, s in enumerate(symbols)})

    def __len__(self): return len(self.symbols)

    def __contains__(self, symbol): return symbol in self.index

    def __iter__(self): return iter(self.symbols)

    @property
    def graphemes(self):
        """The symbols that are not reserved."""
        return tuple(s for s in self.symbols if s not in RESERVED_SYMBOLS)

    @property
    def has_sil(self): return SIL in self.index

    #------------------------------- Methods ---------------------------------#
    def save(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(''.join(s + '\n' for s in self.symbols), encoding='utf-8')
        return path

    @classmethod
    def load(cls, path):
        lines = Path(path).read_text(encoding='utf-8').split('\n')
        if lines and lines[-1] == '': lines = lines[:-1]
        return cls(tuple(lines))

###############################################################################
def build_inventory(transcripts, min_count=10, exclusion_classes=DEFAULT_EXCLUSIONS,
                    keep=DEFAULT_KEEP, sil=True):
    """
    Keep the graphemes occurring at least `min_count` times that do not
    belong to an excluded class, and add the reserved symbols.
    """
    transcripts = list(transcripts)
    if not transcripts:
        raise DataError("Cannot build a grapheme inventory from no transcripts.")
    counts = count_graphemes(transcripts)
    kept = sorted(g for g, n in counts.items()
                  if n >= min_count and not is_excluded(g, exclusion_classes, keep))
    reserved = (SPACE, SIL) if sil else (SPACE,)
    return GraphemeInventory(reserved + tuple(kept), {g: counts[g] for g in kept})

###############################################################################
@dataclass
class FilterReport:
    """How many utterances `filter_utterances` kept and which it dropped."""

    retained:    int
    dropped:     int
    dropped_ids: list

    def __str__(self):
        return "Retained %i utterances, dropped %i." % (self.retained, self.dropped)

def transcript_of(item):
    return item if isinstance(item, str) else item.transcript

def id_of(item, num):
    return str(num) if isinstance(item, str) else item.id

def is_covered(transcript, inventory):
    return all(g in inventory for word in transcript.split()
                              for g in split_graphemes(word))

def filter_utterances(dataset, inventory):
    """
    Drop the utterances whose transcript contains a grapheme outside the
    inventory. Returns the retained utterances and a `FilterReport`.
    """
    retained, dropped = [], []
    for num, item in enumerate(dataset):
        if is_covered(transcript_of(item), inventory): retained.append(item)
        else: dropped.append(id_of(item, num))
    return retained, FilterReport(len(retained), len(dropped), dropped)

###############################################################################
def transcript_to_targets(transcript, inventory, sil=False):
    """
    Symbols of a transcript together with the index of the word each symbol
    belongs to, -1 for reserved symbols.
    """
    words = transcript.split()
    if not words:
        raise DataError("Cannot expand an empty transcript into symbols.")
    if sil and not inventory.has_sil:
        raise DataError("Silence padding requested but '%s' is not in the inventory." % SIL)
    symbols, word_ids = [], []
    if sil: symbols.append(SIL); word_ids.append(-1)
    for num, word in enumerate(words):
        if num > 0: symbols.append(SPACE); word_ids.append(-1)
        for grapheme in split_graphemes(word):
            if grapheme not in inventory:
                msg = "The grapheme '%s' of the word '%s' is not in the inventory."
                raise DataError(msg % (grapheme, word))
            symbols.append(grapheme)
            word_ids.append(num)
    if sil: symbols.append(SIL); word_ids.append(-1)
    return symbols, word_ids

def transcript_to_symbols(transcript, inventory, sil=False):
    """
    The symbol sequence of a transcript: the graphemes of each word with
    `<space>` between words, optionally surrounded by `<sil>`.
    """
    return transcript_to_targets(transcript, inventory, sil)[0]

def symbols_to_words(symbols):
    """Inverse of `transcript_to_symbols`, reserved symbols split words."""
    words, current = [], []
    for symbol in symbols:
        if symbol in RESERVED_SYMBOLS:
            if current: words.append(''.join(current))
            current = []
        else:
            current.append(symbol)
    if current: words.append(''.join(current))
    return words
