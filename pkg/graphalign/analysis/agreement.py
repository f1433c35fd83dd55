#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Agreement score: the fraction of graphemes whose frames align with a single
phoneme at least `threshold` of the time.

For every populated grapheme column g of the normalized confusion matrix,
delta_g is 1 when some phoneme p has f(g, p) >= threshold. The score is the
mean of delta_g over the populated columns.

    >>> report = agreement_score(cm)
    >>> report.score
    0.75
"""

# Built-in modules #
from dataclasses import dataclass
from pathlib import Path

# Third party modules #
import pandas
import simplejson

# Internal modules #
from graphalign.core.errors import DataError

###############################################################################
@dataclass
class AgreementReport:
    """Per grapheme rows and the aggregate score."""

    rows:      pandas.DataFrame
    score:     float
    threshold: float

    def __str__(self):
        return "Agreement %.4f over %i graphemes (threshold %g)" % \
               (self.score, len(self.rows), self.threshold)

    def to_dict(self):
        return {'threshold': self.threshold,
                'score':     self.score,
                'graphemes': self.rows.to_dict(orient='records')}

    def save(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(simplejson.dumps(self.to_dict(), indent=4, ensure_ascii=False,
                                         ignore_nan=True), encoding='utf-8')
        return path

###############################################################################
def agreement_score(cm, threshold=0.5, exclude_reserved=True):
    """
    Compute delta_g for every populated grapheme. Reserved symbols are left
    out of both axes unless `exclude_reserved` is false.
    """
    if exclude_reserved: cm = cm.without_reserved()
    totals = cm.column_totals
    populated = [g for g in cm.graphemes if totals[g] > 0]
    if not populated:
        raise DataError("The confusion matrix has no populated grapheme column.")
    norm = cm.normalized
    rows = []
    for g in populated:
        column = norm[g]
        best = column.idxmax()
        fraction = float(column[best])
        rows.append({'grapheme':     g,
                     'frames':       int(totals[g]),
                     'best_phoneme': best,
                     'fraction':     fraction,
                     'delta':        int(fraction >= threshold)})
    rows = pandas.DataFrame(rows, columns=['grapheme', 'frames', 'best_phoneme',
                                           'fraction', 'delta'])
    score = float(rows['delta'].mean())
    return AgreementReport(rows, score, threshold)
