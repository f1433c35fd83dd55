#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Word error rate by Levenshtein alignment, its transliterated variant where
cross-script spellings of the same word are not errors, and the per
utterance and corpus reports.

    >>> wer("a x c".split(), "a b c".split())
    0.3333333333333333
"""

# Built-in modules #
import warnings
from collections import Counter
from pathlib import Path

# Third party modules #
import numpy
import pandas

# Internal modules #
from graphalign.core.errors import DataError

###############################################################################
class TransliterationMap(object):
    """Unordered pairs of words declared equivalent, e.g. native and latin spellings."""

    def __init__(self, pairs=()):
        self.pairs = set()
        for a, b in pairs:
            if a == b:
                raise DataError("The word '%s' cannot be paired with itself." % a)
            self.pairs.add(frozenset((a, b)))

    def __len__(self): return len(self.pairs)

    def equivalent(self, a, b):
        return a == b or frozenset((a, b)) in self.pairs

    @classmethod
    def load(cls, path):
        """UTF-8 TSV, one `native\\tlatin` pair per line."""
        pairs = []
        text = Path(path).read_text(encoding='utf-8')
        for num, line in enumerate(text.split('\n'), start=1):
            if not line.strip(): continue
            fields = line.split('\t')
            if len(fields) != 2:
                msg = "Line %i of the transliteration map '%s' is not a pair."
                raise DataError(msg % (num, path))
            pairs.append((fields[0].strip(), fields[1].strip()))
        return cls(pairs)

###############################################################################
def edit_operations(hyp, ref, tmap=None):
    """
    Levenshtein alignment with unit costs. Returns a list of
    `(operation, ref_word, hyp_word)` with operations `match`, `sub`, `del`
    and `ins`. Substitution cost is zero for map-equivalent words. On equal
    cost the backtrace prefers the diagonal, then deletion.
    """
    hyp, ref = list(hyp), list(ref)
    same = (lambda a, b: a == b) if tmap is None else tmap.equivalent
    n, m = len(ref), len(hyp)
    cost = numpy.zeros((n + 1, m + 1), dtype=numpy.int64)
    cost[:, 0] = numpy.arange(n + 1)
    cost[0, :] = numpy.arange(m + 1)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            diag = cost[i - 1, j - 1] + (0 if same(ref[i - 1], hyp[j - 1]) else 1)
            cost[i, j] = min(diag, cost[i - 1, j] + 1, cost[i, j - 1] + 1)
    # Backtrace #
    ops, i, j = [], n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            sub = 0 if same(ref[i - 1], hyp[j - 1]) else 1
            if cost[i, j] == cost[i - 1, j - 1] + sub:
                ops.append(('sub' if sub else 'match', ref[i - 1], hyp[j - 1]))
                i, j = i - 1, j - 1
                continue
        if i > 0 and cost[i, j] == cost[i - 1, j] + 1:
            ops.append(('del', ref[i - 1], None))
            i -= 1
        else:
            ops.append(('ins', None, hyp[j - 1]))
            j -= 1
    return ops[::-1]

def error_count(hyp, ref, tmap=None):
    return sum(1 for op, _, _ in edit_operations(hyp, ref, tmap) if op != 'match')

def error_rate(hyp, ref, tmap=None):
    hyp, ref = list(hyp), list(ref)
    if not ref:
        if not hyp: return 0.0
        msg = "Empty reference with a %i word hypothesis, the rate is the hypothesis length."
        warnings.warn(msg % len(hyp))
        return float(len(hyp))
    return error_count(hyp, ref, tmap) / len(ref)

def wer(hyp, ref):
    """(substitutions + insertions + deletions) / reference length."""
    return error_rate(hyp, ref)

def transliterated_wer(hyp, ref, tmap):
    """Like `wer` but map-equivalent words count as matches."""
    return error_rate(hyp, ref, tmap)

def substitution_pairs(hyps, refs, tmap=None):
    """
    Count the (reference word, hypothesis word) substitutions over a corpus.
    `hyps` and `refs` are parallel lists of word lists.
    """
    counter = Counter()
    for hyp, ref in zip(hyps, refs):
        for op, r, h in edit_operations(hyp, ref, tmap):
            if op == 'sub': counter[(r, h)] += 1
    rows = [(r, h, c) for (r, h), c in counter.items()]
    df = pandas.DataFrame(rows, columns=['ref', 'hyp', 'count'])
    return df.sort_values(['count', 'ref', 'hyp'], ascending=[False, True, True],
                          ignore_index=True)

###############################################################################
def score_corpus(hyps, refs, tmap=None):
    """
    Score hypotheses against references, both dictionaries of word lists
    keyed by utterance id. Returns the per utterance table and a one row
    corpus summary where rates are total errors over total reference words.
    """
    if tmap is None: tmap = TransliterationMap()
    rows = []
    for utt_id, ref in refs.items():
        if utt_id not in hyps:
            raise DataError("No hypothesis for the utterance '%s'." % utt_id)
        hyp = hyps[utt_id]
        rows.append({'utt_id':       utt_id,
                     'ref_words':    len(ref),
                     'errors':       error_count(hyp, ref),
                     'translit_errors': error_count(hyp, ref, tmap),
                     'wer':          wer(hyp, ref),
                     'translit_wer': transliterated_wer(hyp, ref, tmap),
                     'ref':          ' '.join(ref),
                     'hyp':          ' '.join(hyp)})
    per_utt = pandas.DataFrame(rows, columns=['utt_id', 'ref_words', 'errors',
                                              'translit_errors', 'wer', 'translit_wer',
                                              'ref', 'hyp'])
    n_words = int(per_utt['ref_words'].sum())
    denominator = max(n_words, 1)
    corpus = pandas.DataFrame([{'utterances':   len(per_utt),
                                'ref_words':    n_words,
                                'errors':       int(per_utt['errors'].sum()),
                                'wer':          per_utt['errors'].sum() / denominator,
                                'translit_wer': per_utt['translit_errors'].sum() / denominator}])
    return per_utt, corpus
