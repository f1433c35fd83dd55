#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Time stamped segment tables of an alignment, one for the symbols and one for
the words, both with `start_s, end_s, label` columns.
"""

# Third party modules #
import pandas

###############################################################################
def symbol_segments(alignment):
    step = alignment.frame_shift_ms / 1000.0
    rows = [(a * step, b * step, symbol) for symbol, a, b, _ in alignment.segments()]
    return pandas.DataFrame(rows, columns=['start_s', 'end_s', 'label'])

def word_segments(alignment, words):
    """
    Spans of the words of the transcript, `words` being the list of words
    the word indices of the alignment refer to.
    """
    spans = {}
    for _, a, b, word in alignment.segments():
        if word < 0: continue
        first, _ = spans.get(word, (a, b))
        spans[word] = (first, b)
    step = alignment.frame_shift_ms / 1000.0
    rows = [(a * step, b * step, words[w]) for w, (a, b) in sorted(spans.items())]
    return pandas.DataFrame(rows, columns=['start_s', 'end_s', 'label'])

def segment_table(alignments, transcripts):
    """
    Word and symbol segments of many alignments in one table, with the
    utterance id and the tier as extra columns. `transcripts` maps ids to
    the transcript the word indices refer to.
    """
    frames = []
    for ali in alignments:
        words = transcripts[ali.utt_id].split()
        for tier, df in (('word', word_segments(ali, words)), ('symbol', symbol_segments(ali))):
            frames.append(df.assign(utt_id=ali.utt_id, tier=tier))
    columns = ['utt_id', 'tier', 'start_s', 'end_s', 'label']
    if not frames: return pandas.DataFrame(columns=columns)
    return pandas.concat(frames, ignore_index=True)[columns]
