#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Per-utterance parallelism and per-utterance random number generators.

Results always come back in input order, so any reduction done afterwards
is identical whatever the number of workers.
"""

# Built-in modules #
import hashlib

# Third party modules #
import numpy
from p_tqdm import p_map, t_map

###############################################################################
def map_utterances(func, items, workers=1, desc=None):
    """
    Apply `func` to every item. With more than one worker the items are
    dispatched to a process pool, `p_map` keeps the ordering.
    """
    items = list(items)
    if not items: return []
    kwargs = {'disable': True} if desc is None else {'desc': desc}
    if workers > 1 and len(items) > 1:
        return p_map(func, items, num_cpus=workers, **kwargs)
    return t_map(func, items, **kwargs)

def utterance_seed(seed, utt_id):
    """A `SeedSequence` derived from the global seed and an utterance id."""
    digest = hashlib.sha256(str(utt_id).encode('utf-8')).digest()
    words  = numpy.frombuffer(digest[:16], dtype='<u4').tolist()
    return numpy.random.SeedSequence([int(seed)] + words)

def utterance_rng(seed, utt_id):
    """Random generator private to one utterance."""
    return numpy.random.default_rng(utterance_seed(seed, utt_id))
