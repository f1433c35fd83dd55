#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
The graphemic lexicon maps every word to the sequence of its graphemes.
No pronunciation knowledge is needed, the spelling is the pronunciation.

Stored as UTF-8 text, one `word\\tg1 g2 ...` entry per line, sorted by word.
"""

# Built-in modules #
from pathlib import Path

# Internal modules #
from graphalign.core.errors import DataError
from graphalign.lexicon.inventory import split_graphemes

###############################################################################
class GraphemicLexicon(object):
    """Mapping from words to grapheme tuples."""

    def __init__(self, entries, inventory=None):
        self.entries = {}
        for word, graphemes in entries.items():
            graphemes = tuple(graphemes)
            if not graphemes:
                raise DataError("The word '%s' has an empty pronunciation." % word)
            if inventory is not None:
                missing = [g for g in graphemes if g not in inventory]
                if missing:
                    msg = "The word '%s' uses graphemes %s missing from the inventory."
                    raise DataError(msg % (word, missing))
            self.entries[word] = graphemes

    def __repr__(self):
        return '%s object with %i words' % (self.__class__, len(self))

    def __len__(self): return len(self.entries)

    def __contains__(self, word): return word in self.entries

    def __getitem__(self, word): return self.entries[word]

    def __eq__(self, other):
        if not isinstance(other, GraphemicLexicon): return NotImplemented
        return self.entries == other.entries

    @property
    def words(self): return sorted(self.entries)

    #------------------------------- Methods ---------------------------------#
    def save(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = ("%s\t%s\n" % (w, ' '.join(self.entries[w])) for w in self.words)
        path.write_text(''.join(lines), encoding='utf-8')
        return path

    @classmethod
    def load(cls, path, inventory=None):
        entries = {}
        text = Path(path).read_text(encoding='utf-8')
        for num, line in enumerate(text.split('\n'), start=1):
            if not line: continue
            if '\t' not in line:
                raise DataError("Line %i of the lexicon '%s' has no tab." % (num, path))
            word, graphemes = line.split('\t', 1)
            entries[word] = graphemes.split(' ') if graphemes else ()
        return cls(entries, inventory)

###############################################################################
def build_lexicon(transcripts, inventory):
    """One entry per distinct word of the (filtered) transcripts."""
    words = {word for transcript in transcripts for word in transcript.split()}
    return GraphemicLexicon({w: split_graphemes(w) for w in words}, inventory)
