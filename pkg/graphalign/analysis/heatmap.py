#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Write a confusion matrix as a CSV table and as a standalone SVG heatmap.

The SVG is rendered from a mustache template. The opacity of every cell is
its normalized value printed with three decimals, so a cell with a value of
one has `fill-opacity="1.000"`.

    >>> emit_heatmap(cm, "analysis/confusion", graphemes=['a', 'b'])
    (PosixPath('analysis/confusion.csv'), PosixPath('analysis/confusion.svg'))
"""

# Built-in modules #
from pathlib import Path

# Third party modules #
import pystache

# Internal modules #
from graphalign import module_dir

# Constants #
CELL   = 24
MARGIN = 80
template_path = Path(str(module_dir)) / 'analysis' / 'templates' / 'heatmap.svg.mustache'

###############################################################################
def svg_context(cm, title):
    """Values filled into the mustache template."""
    norm = cm.normalized
    cols, rows = cm.graphemes, cm.phonemes
    width  = MARGIN + CELL * len(cols) + 20
    height = MARGIN + CELL * len(rows) + 40
    cells = []
    for i, p in enumerate(rows):
        for j, g in enumerate(cols):
            value = float(norm.loc[p, g])
            cells.append({'x': MARGIN + j * CELL, 'y': MARGIN + i * CELL,
                          'size': CELL, 'opacity': '%.3f' % value,
                          'value': '%.4f' % value, 'row': p, 'col': g})
    return {'width':     width,
            'height':    height,
            'font_size': 11,
            'title':     title,
            'title_x':   width // 2,
            'footer_y':  height - 10,
            'columns':   [{'x': MARGIN + j * CELL + CELL // 2, 'y': MARGIN - 8, 'label': g}
                          for j, g in enumerate(cols)],
            'rows':      [{'x': MARGIN - 6, 'y': MARGIN + i * CELL + CELL // 2 + 4, 'label': p}
                          for i, p in enumerate(rows)],
            'cells':     cells}

def emit_heatmap(cm, output_path, graphemes=None, phonemes=None,
                 title="Grapheme / phoneme confusion"):
    """
    Write `<output_path>.csv` and `<output_path>.svg`, optionally keeping only
    a subset of the symbols. The subset keeps the values of the full matrix.
    """
    output_path = Path(output_path)
    if graphemes is not None or phonemes is not None:
        cm = cm.subset(graphemes, phonemes)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path = cm.to_csv(output_path.with_suffix('.csv'))
    svg_path = output_path.with_suffix('.svg')
    template = template_path.read_text(encoding='utf-8')
    svg_path.write_text(pystache.render(template, svg_context(cm, title)), encoding='utf-8')
    return csv_path, svg_path
