#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Word n-gram language model with Witten-Bell smoothing, kept in backoff form
so it can be written and read as a textual ARPA file.

Interpolated Witten-Bell gives, for a history h with c(h) tokens and
t(h) distinct followers:

    P(w | h) = (c(h, w) + t(h) * P(w | h')) / (c(h) + t(h))

where h' drops the oldest word of h. The unigram level interpolates with a
uniform distribution over the vocabulary. A word never seen after h thus
gets `t(h) / (c(h) + t(h)) * P(w | h')`, which is the backoff weight of h.

Probabilities are held as base 10 logarithms and written with the shortest
representation that reads back to the same float.

    >>> lm = train_ngram(["go on", "go"], order=3)
    >>> lm.perplexity(["go on"])
"""

# Built-in modules #
from collections import Counter, defaultdict
from pathlib import Path

# Third party modules #
import numpy

# Internal modules #
from graphalign.core.errors import DataError

# Constants #
BOS, EOS, UNK = '<s>', '</s>', '<unk>'
NO_PROB = -99.0

###############################################################################
class NGramLm(object):
    """
    `probs[n]` maps n-gram tuples of length n+1 to log10 probabilities,
    `backoffs` maps history tuples to log10 backoff weights.
    """

    def __init__(self, order, probs, backoffs):
        self.order    = int(order)
        self.probs    = probs
        self.backoffs = backoffs
        self.vocab    = {g[0] for g in probs[0]}

    def __repr__(self):
        return '%s object: order %i, %i words' % (self.__class__, self.order, len(self.vocab))

    def __eq__(self, other):
        if not isinstance(other, NGramLm): return NotImplemented
        return (self.order == other.order and self.probs == other.probs
                and self.backoffs == other.backoffs)

    #------------------------------- Methods ---------------------------------#
    def map_word(self, word):
        return word if word in self.vocab else UNK

    def log10_prob(self, word, context=()):
        """Base 10 log of P(word | context), backing off as needed."""
        word = self.map_word(word)
        context = tuple(self.map_word(w) for w in context)[-(self.order - 1):] \
                  if self.order > 1 else ()
        total = 0.0
        while True:
            gram = context + (word,)
            found = self.probs[len(gram) - 1].get(gram)
            if found is not None: return total + found
            if not context:
                raise DataError("The word '%s' has no unigram probability." % word)
            total += self.backoffs.get(context, 0.0)
            context = context[1:]

    def log_prob(self, word, context=()):
        """Natural log of P(word | context)."""
        return self.log10_prob(word, context) * numpy.log(10.0)

    def sentence_log10_prob(self, words):
        """Base 10 log probability of a sentence including the end marker."""
        context, total = (BOS,), 0.0
        for word in list(words) + [EOS]:
            total += self.log10_prob(word, context)
            context = (context + (word,))[-(self.order - 1):] if self.order > 1 else ()
        return total

    def perplexity(self, sentences):
        """Perplexity over sentences, the end marker counting as a token."""
        total, tokens = 0.0, 0
        for sentence in sentences:
            words = sentence.split() if isinstance(sentence, str) else list(sentence)
            total += self.sentence_log10_prob(words)
            tokens += len(words) + 1
        if tokens == 0:
            raise DataError("Cannot compute the perplexity of an empty corpus.")
        return float(10.0 ** (-total / tokens))

    def context_mass(self, context):
        """
        Probability mass of every word after `context`, seen n-grams plus
        backoff mass. Equals one for a normalised model.
        """
        context = tuple(context)
        words = sorted(self.vocab - {BOS})
        seen = {g[-1]: p for g, p in self.probs[len(context)].items() if g[:-1] == context}
        mass = sum(10.0 ** p for p in seen.values())
        unseen = [w for w in words if w not in seen]
        if unseen:
            weight = 10.0 ** self.backoffs.get(context, 0.0)
            lower = sum(10.0 ** self.log10_prob(w, context[1:]) for w in unseen)
            mass += weight * lower
        return mass

    #-------------------------------- ARPA -----------------------------------#
    def write_arpa(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = ['\\data\\']
        lines += ['ngram %i=%i' % (n + 1, len(self.probs[n])) for n in range(self.order)]
        for n in range(self.order):
            lines += ['', '\\%i-grams:' % (n + 1)]
            for gram in sorted(self.probs[n]):
                fields = [repr(self.probs[n][gram]), ' '.join(gram)]
                if gram in self.backoffs: fields.append(repr(self.backoffs[gram]))
                lines.append('\t'.join(fields))
        lines += ['', '\\end\\', '']
        path.write_text('\n'.join(lines), encoding='utf-8')
        return path

    @classmethod
    def read_arpa(cls, path):
        probs, backoffs, order, current = [], {}, 0, None
        for line in Path(path).read_text(encoding='utf-8').split('\n'):
            line = line.strip()
            if not line or line == '\\data\\': continue
            if line == '\\end\\': break
            if line.startswith('ngram '):
                order = max(order, int(line[6:].split('=')[0]))
                continue
            if line.startswith('\\') and line.endswith('-grams:'):
                current = int(line[1:-len('-grams:')]) - 1
                while len(probs) <= current: probs.append({})
                continue
            fields = line.split('\t') if '\t' in line else line.split()
            if current is None: raise DataError("Malformed ARPA file '%s'." % path)
            if '\t' in line:
                gram = tuple(fields[1].split(' '))
                extra = fields[2:]
            else:
                gram = tuple(fields[1:current + 2])
                extra = fields[current + 2:]
            probs[current][gram] = float(fields[0])
            if extra: backoffs[gram] = float(extra[0])
        if order == 0 or len(probs) != order:
            raise DataError("Malformed ARPA file '%s'." % path)
        return cls(order, probs, backoffs)

###############################################################################
def count_ngrams(sentences, order):
    """Counts of every n-gram up to `order`, sentences padded with markers."""
    counts = [Counter() for _ in range(order)]
    for words in sentences:
        seq = [BOS] + list(words) + [EOS]
        for j in range(1, len(seq)):
            for n in range(order):
                if j - n < 0: break
                counts[n][tuple(seq[j - n:j + 1])] += 1
    return counts

def train_ngram(transcripts, order=5):
    """Witten-Bell smoothed backoff model of the transcripts."""
    sentences = [t.split() if isinstance(t, str) else list(t) for t in transcripts]
    sentences = [s for s in sentences if s]
    if not sentences:
        raise DataError("Cannot train a language model on an empty corpus.")
    if order < 1:
        raise DataError("The n-gram order must be positive.")
    counts = count_ngrams(sentences, order)
    vocab = sorted({w for s in sentences for w in s} | {EOS, UNK})
    # Totals and follower type counts per history #
    history_total = [defaultdict(int) for _ in range(order)]
    history_types = [defaultdict(int) for _ in range(order)]
    for n in range(order):
        for gram, c in counts[n].items():
            history_total[n][gram[:-1]] += c
            history_types[n][gram[:-1]] += 1
    # Unigrams interpolated with the uniform distribution #
    total, types = history_total[0][()], history_types[0][()]
    lin = [{(w,): (counts[0][(w,)] + types / len(vocab)) / (total + types) for w in vocab}]
    for n in range(1, order):
        level = {}
        for gram, c in counts[n].items():
            h = gram[:-1]
            # Every suffix of a seen n-gram was seen at the lower order #
            lower = lin[n - 1][gram[1:]]
            level[gram] = (c + history_types[n][h] * lower) / \
                          (history_total[n][h] + history_types[n][h])
        lin.append(level)
    # Log domain, backoff weights for every history that has followers #
    probs = [{g: float(numpy.log10(p)) for g, p in level.items()} for level in lin]
    probs[0][(BOS,)] = NO_PROB
    backoffs = {}
    for n in range(1, order):
        for h, c in history_total[n].items():
            backoffs[h] = float(numpy.log10(history_types[n][h] / (c + history_types[n][h])))
    return NGramLm(order, probs, backoffs)

