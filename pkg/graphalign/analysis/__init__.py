#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Grapheme / phoneme alignment comparison: confusion matrices, agreement score,
heatmaps and segment tables.
"""

# Internal modules #
from graphalign.analysis.confusion import ConfusionMatrix, confusion_matrix
from graphalign.analysis.confusion import alignment_accuracy, read_matrix_csv
from graphalign.analysis.agreement import AgreementReport, agreement_score
from graphalign.analysis.heatmap import emit_heatmap
from graphalign.analysis.segments import symbol_segments, word_segments, segment_table
