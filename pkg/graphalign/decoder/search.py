#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Frame synchronous token passing over the graphemic lexicon.

The lexicon is compiled into a prefix tree of graphemes. The decoding graph
is `[<sil>] word (<space> word)* [<sil>]`, every grapheme, `<space>` and
`<sil>` being expanded to its HMM states. A token sits in one HMM state of
one graph unit and carries its language model context; tokens reaching the
same (unit, state, context) are recombined, the best one surviving. The
language model and the word insertion penalty are applied when a word is
left. With a finite `beam_width` only that many tokens survive each frame.

    >>> from graphalign.decoder.search import beam_decode
    >>> beam_decode(am, priors, lm, lexicon, stacked, beam_width=200)
    ['go', 'on']
"""

# Built-in modules #
import warnings

# Third party modules #
import numpy

# Internal modules #
from graphalign import SPACE, SIL
from graphalign.core.errors import DataError
from graphalign.decoder.ngram import BOS, EOS
from graphalign.neural_am.align import pseudo_log_likelihoods

# Constants #
SIL_START, SPACE_UNIT, SIL_END = 0, 1, 2
FIRST_NODE = 3

###############################################################################
class PrefixTree(object):
    """
    Graphemes of all lexicon words merged on common prefixes. Node ids
    start at `FIRST_NODE`, the smaller ids being the `<sil>` and `<space>`
    units of the decoding graph.
    """

    def __init__(self, lexicon):
        if len(lexicon) == 0:
            raise DataError("Cannot decode with an empty lexicon.")
        self.symbol   = {}
        self.children = {None: []}
        self.word     = {}
        lookup = {}
        for word in lexicon.words:
            parent = None
            for grapheme in lexicon[word]:
                key = (parent, grapheme)
                if key not in lookup:
                    node = FIRST_NODE + len(lookup)
                    lookup[key] = node
                    self.symbol[node] = grapheme
                    self.children[node] = []
                    self.children[parent].append(node)
                parent = lookup[key]
            self.word[parent] = word

    def __len__(self): return len(self.symbol)

    @property
    def roots(self): return self.children[None]

###############################################################################
def beam_search(scores, label_of, n_states, lm, lexicon, beam_width=None,
                lm_weight=1.0, insertion_penalty=0.0, use_sil=True):
    """
    Best word sequence for a frames x labels matrix of emission scores.
    `label_of(symbol, state)` gives the score column of an HMM state.
    Returns the words and the total score, `([], -inf)` with a warning when
    no token reaches an end state.
    """
    scores = numpy.asarray(scores, dtype=numpy.float64)
    tree   = PrefixTree(lexicon)
    n_frames = scores.shape[0]
    order  = lm.order
    # Emission column of every (unit, state) #
    unit_symbol = dict(tree.symbol)
    unit_symbol[SPACE_UNIT] = SPACE
    if use_sil: unit_symbol[SIL_START] = unit_symbol[SIL_END] = SIL
    column = {(u, k): label_of(s, k) for u, s in unit_symbol.items() for k in range(n_states)}
    last = n_states - 1
    # Word scores are memoised per (context, word) #
    cache = {}
    def word_score(context, word):
        key = (context, word)
        if key not in cache:
            value = lm_weight * lm.log_prob(word, context) - insertion_penalty
            new_context = (context + (word,))[-(order - 1):] if order > 1 else ()
            cache[key] = (value, new_context)
        return cache[key]
    def successors(unit, k, context):
        yield (unit, k, context), 0.0, None
        if k < last:
            yield (unit, k + 1, context), 0.0, None
            return
        if unit in (SIL_START, SPACE_UNIT):
            for child in tree.roots: yield (child, 0, context), 0.0, None
            return
        if unit == SIL_END: return
        for child in tree.children[unit]: yield (child, 0, context), 0.0, None
        if unit in tree.word:
            word = tree.word[unit]
            value, new_context = word_score(context, word)
            yield (SPACE_UNIT, 0, new_context), value, word
            if use_sil: yield (SIL_END, 0, new_context), value, word
    # First frame #
    start = (BOS,) if order > 1 else ()
    entries = [(root, 0, start) for root in tree.roots]
    if use_sil: entries.insert(0, (SIL_START, 0, start))
    tokens = {key: (scores[0, column[key[:2]]], ()) for key in entries}
    # Token passing #
    for t in range(1, n_frames):
        new = {}
        for (unit, k, context), (score, words) in tokens.items():
            for key, extra, word in successors(unit, k, context):
                total = score + extra + scores[t, column[key[:2]]]
                if key not in new or total > new[key][0]:
                    new[key] = (total, words + (word,) if word else words)
        if beam_width is not None and len(new) > beam_width:
            ranked = sorted(new.items(), key=lambda item: (-item[1][0], item[0]))
            new = dict(ranked[:beam_width])
        tokens = new
    # Complete hypotheses #
    best_score, best_words = -numpy.inf, None
    for (unit, k, context), (score, words) in sorted(tokens.items()):
        if k != last: continue
        if unit in tree.word:
            value, context = word_score(context, tree.word[unit])
            score, words = score + value, words + (tree.word[unit],)
        elif unit != SIL_END:
            continue
        score += lm_weight * lm.log_prob(EOS, context)
        if score > best_score: best_score, best_words = score, words
    if best_words is None:
        warnings.warn("No hypothesis survived to the end of the utterance.")
        return [], -numpy.inf
    return list(best_words), float(best_score)

def beam_decode(am, priors, lm, lexicon, features, beam_width=200, lm_weight=1.0,
                kappa=1.0, insertion_penalty=0.0, use_sil=None):
    """
    Decode one utterance with the recurrent model pseudo log-likelihoods.
    `<sil>` units are used whenever the model has a `<sil>` label.
    """
    if use_sil is None: use_sil = SIL in am.symbols
    scores = pseudo_log_likelihoods(am, features, priors, kappa)
    words, _ = beam_search(scores, am.label_of, am.n_states, lm, lexicon,
                           beam_width, lm_weight, insertion_penalty, use_sil)
    return words
