#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Grapheme / phoneme confusion matrices built from two alignments of the same
utterances at the same frame rate.

Rows are phonemes, columns are graphemes. The normalized view divides every
column by its total, so each populated column is the distribution of
phonemes that the frames of that grapheme are aligned to.

    >>> cm = confusion_matrix(grapheme_aligns, phoneme_aligns)
    >>> cm.normalized.loc[:, 'a']
"""

# Built-in modules #
import csv
import warnings
from pathlib import Path

# Third party modules #
import numpy
import pandas

# Internal modules #
from graphalign import RESERVED_SYMBOLS
from graphalign.core.errors import DataError

###############################################################################
def ordered_labels(labels):
    """Reserved symbols first, then the others sorted."""
    labels = set(labels)
    reserved = [s for s in RESERVED_SYMBOLS if s in labels]
    return reserved + sorted(labels - set(RESERVED_SYMBOLS))

def by_utterance(alignments):
    if isinstance(alignments, dict): return alignments
    return {ali.utt_id: ali for ali in alignments}

###############################################################################
class ConfusionMatrix(object):
    """
    Frame co-occurrence counts. `column_totals` defaults to the column sums
    of `counts`; a subset keeps the totals of the matrix it was cut from so
    its normalized values are unchanged.
    """

    def __init__(self, counts, column_totals=None):
        self.counts = counts.astype(numpy.int64)
        if column_totals is None: column_totals = self.counts.sum(axis=0)
        self.column_totals = column_totals.reindex(self.counts.columns)

    def __repr__(self):
        return '%s object: %i phonemes x %i graphemes, %i frames' % \
               (self.__class__, len(self.phonemes), len(self.graphemes), self.total)

    @property
    def graphemes(self): return list(self.counts.columns)

    @property
    def phonemes(self): return list(self.counts.index)

    @property
    def total(self): return int(self.counts.values.sum())

    @property
    def is_empty(self): return self.total == 0

    @property
    def normalized(self):
        """Column-stochastic view, empty columns left at zero."""
        totals = self.column_totals.replace(0, numpy.nan)
        return (self.counts / totals).fillna(0.0)

    #------------------------------- Methods ---------------------------------#
    def subset(self, graphemes=None, phonemes=None):
        """Keep some rows and columns without normalizing again."""
        cols = self.graphemes if graphemes is None else [g for g in graphemes]
        rows = self.phonemes if phonemes is None else [p for p in phonemes]
        missing = [s for s in cols if s not in self.counts.columns] + \
                  [s for s in rows if s not in self.counts.index]
        if missing:
            raise DataError("Symbols %s are not in the confusion matrix." % missing)
        return ConfusionMatrix(self.counts.loc[rows, cols], self.column_totals[cols])

    def without_reserved(self):
        """Drop reserved symbols from both axes and normalize again."""
        cols = [g for g in self.graphemes if g not in RESERVED_SYMBOLS]
        rows = [p for p in self.phonemes if p not in RESERVED_SYMBOLS]
        return ConfusionMatrix(self.counts.loc[rows, cols])

    def to_csv(self, path, normalized=True):
        """Symbols quoted, values with twelve significant digits."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        df = self.normalized if normalized else self.counts
        df.to_csv(path, float_format='%.12g', quoting=csv.QUOTE_NONNUMERIC,
                  index_label='phoneme')
        return path

def read_matrix_csv(path):
    """Read back a matrix written by `ConfusionMatrix.to_csv`."""
    df = pandas.read_csv(path, index_col=0, quoting=csv.QUOTE_NONNUMERIC,
                         keep_default_na=False)
    df.index = df.index.astype(str)
    df.columns = df.columns.astype(str)
    return df

###############################################################################
def paired_alignments(grapheme_aligns, phoneme_aligns):
    """
    Utterances present in both sets, in the order of the grapheme set.
    Utterances found in one set only are skipped with a warning.
    """
    graph, phon = by_utterance(grapheme_aligns), by_utterance(phoneme_aligns)
    only = sorted(set(graph) ^ set(phon))
    if only:
        msg = "%i utterances are aligned in one set only and are skipped: %s"
        warnings.warn(msg % (len(only), only[:5]))
    pairs = []
    for utt_id, g in graph.items():
        if utt_id not in phon: continue
        p = phon[utt_id]
        if g.frame_shift_ms != p.frame_shift_ms:
            msg = "Utterance '%s' is aligned at %gms and %gms, bridge the rates first."
            raise DataError(msg % (utt_id, g.frame_shift_ms, p.frame_shift_ms))
        if len(g) != len(p):
            msg = "Utterance '%s' has %i grapheme frames but %i phoneme frames."
            raise DataError(msg % (utt_id, len(g), len(p)))
        pairs.append((g, p))
    return pairs

def confusion_matrix(grapheme_aligns, phoneme_aligns, graphemes=None, phonemes=None):
    """
    Count the frames labelled g graphemically and p phonemically.
    The axes default to the labels seen, reserved symbols first.
    """
    pairs = paired_alignments(grapheme_aligns, phoneme_aligns)
    if not pairs:
        warnings.warn("No utterance is shared by the two alignment sets.")
        return ConfusionMatrix(pandas.DataFrame(numpy.zeros((0, 0), dtype=numpy.int64)))
    g_labels = numpy.concatenate([numpy.array(g.symbols, dtype=object) for g, _ in pairs])
    p_labels = numpy.concatenate([numpy.array(p.symbols, dtype=object) for _, p in pairs])
    if graphemes is None: graphemes = ordered_labels(g_labels)
    if phonemes is None: phonemes = ordered_labels(p_labels)
    col = {g: i for i, g in enumerate(graphemes)}
    row = {p: i for i, p in enumerate(phonemes)}
    counts = numpy.zeros((len(phonemes), len(graphemes)), dtype=numpy.int64)
    keep = [(row[p], col[g]) for g, p in zip(g_labels, p_labels) if g in col and p in row]
    if keep:
        rows, cols = zip(*keep)
        numpy.add.at(counts, (numpy.array(rows), numpy.array(cols)), 1)
    return ConfusionMatrix(pandas.DataFrame(counts, index=list(phonemes), columns=list(graphemes)))

def alignment_accuracy(hyp_aligns, ref_aligns):
    """Fraction of frames on which two alignment sets give the same symbol."""
    pairs = paired_alignments(hyp_aligns, ref_aligns)
    frames = sum(len(h) for h, _ in pairs)
    if frames == 0:
        raise DataError("No frames to compare.")
    same = sum(int(numpy.sum(numpy.array(h.symbols, dtype=object) ==
                             numpy.array(r.symbols, dtype=object))) for h, r in pairs)
    return same / frames
