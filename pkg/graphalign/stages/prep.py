#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Corpus preparation: load the manifest, split off the held-out utterances,
build the grapheme inventory and the lexicon from the training transcripts,
augment the training set with noise and compute both feature streams.

    >>> runner.prep()
    >>> runner.prep.inventory
    >>> runner.prep.features('plp', runner.prep.train_ids)
"""

# Built-in modules #
import warnings
from functools import partial
from pathlib import Path

# Third party modules #
import numpy
import pandas
import simplejson

# First party modules #
from plumbing.cache import property_cached

# Internal modules #
from graphalign.core.errors import ConfigError, DataError
from graphalign.core.parallel import map_utterances
from graphalign.corpus import NoiseProfile, augment_dataset, load_dataset, load_noise_bank
from graphalign.features import FeatureMatrix, log_mel, plp_with_deltas, stack_downsample
from graphalign.lexicon import GraphemeInventory, GraphemicLexicon
from graphalign.lexicon import build_inventory, build_lexicon, filter_utterances
from graphalign.lexicon import transcript_to_targets
from graphalign.stages.base import Stage

###############################################################################
def extract_features(segment, params):
    """Both feature streams of one utterance, module level for the workers."""
    plp = plp_with_deltas(segment, params['n_ceps'], params['lpc_order'],
                          params['window_ms'], params['shift_ms'], params['preemphasis'])
    mel = log_mel(segment, params['n_mels'], params['window_ms'], params['shift_ms'],
                  params['low_hz'], params['high_hz'], params['preemphasis'])
    stacked = stack_downsample(mel, params['left_context'], params['rate_factor'])
    return plp, stacked

def split_heldout(dataset, count, seed):
    """Seeded choice of `count` held-out utterances, both parts in corpus order."""
    if count == 0: return list(dataset), []
    if count >= len(dataset):
        msg = "Cannot hold out %i of the %i utterances of the corpus."
        raise DataError(msg % (count, len(dataset)))
    rng = numpy.random.default_rng(seed)
    chosen = set(rng.choice(len(dataset), size=count, replace=False).tolist())
    train   = [s for i, s in enumerate(dataset) if i not in chosen]
    heldout = [s for i, s in enumerate(dataset) if i in chosen]
    return train, heldout

###############################################################################
class Prep(Stage):

    short_name = 'prep'
    out_dir    = 'prep'

    all_paths = """
    /prep/
    /prep/train.tsv
    /prep/heldout.tsv
    /prep/inventory.txt
    /prep/lexicon.txt
    /prep/report.json
    /prep/plp/
    /prep/stacked/
    """

    #----------------------------- Properties --------------------------------#
    @property
    def manifest(self):
        chosen = self.config['paths']['manifest']
        if not chosen:
            raise ConfigError("The configuration value 'paths.manifest' is not set.")
        path = self.combo.resolve(chosen)
        if not path.exists():
            raise DataError("The corpus manifest '%s' does not exist." % path)
        return path

    def extra_inputs(self):
        return [self.manifest]

    @property
    def train(self):
        """Training utterances, with the noisy copies, `utt_id source_id transcript`."""
        return pandas.read_csv(str(self.paths.train), sep='\t', dtype=str,
                               keep_default_na=False)

    @property
    def heldout(self):
        return pandas.read_csv(str(self.paths.heldout), sep='\t', dtype=str,
                               keep_default_na=False)

    @property
    def train_ids(self): return list(self.train['utt_id'])

    @property
    def heldout_ids(self): return list(self.heldout['utt_id'])

    @property
    def transcripts(self):
        """Transcripts of every prepared utterance keyed by id."""
        both = pandas.concat([self.train, self.heldout])
        return dict(zip(both['utt_id'], both['transcript']))

    @property_cached
    def inventory(self):
        return GraphemeInventory.load(self.paths.inventory)

    @property_cached
    def lexicon(self):
        return GraphemicLexicon.load(self.paths.lexicon, self.inventory)

    #------------------------------- Methods ---------------------------------#
    def features(self, kind, utt_ids):
        """Feature matrices of the given utterances, `kind` is plp or stacked."""
        directory = Path(str(self.paths[kind + '_dir']))
        return {utt_id: FeatureMatrix.load(directory / (utt_id + '.gafm'))
                for utt_id in utt_ids}

    def targets(self, utt_ids):
        """`(symbols, words)` of the given utterances."""
        transcripts = self.transcripts
        sil = self.config['lexicon']['sil']
        return {utt_id: transcript_to_targets(transcripts[utt_id], self.inventory, sil)
                for utt_id in utt_ids}

    def run(self):
        cfg = self.config
        # Load #
        dataset = load_dataset(self.manifest)
        self.log.info("Loaded %i utterances from '%s'." % (len(dataset), self.manifest))
        train, heldout = split_heldout(dataset, cfg['corpus']['heldout_count'], self.seed)
        # Inventory and lexicon come from the training transcripts only #
        lex = cfg['lexicon']
        inventory = build_inventory([s.transcript for s in train], lex['min_count'],
                                    tuple(lex['exclusions']), tuple(lex['keep']), lex['sil'])
        self.log.info("Inventory of %i symbols." % len(inventory))
        train, train_report = filter_utterances(train, inventory)
        heldout, heldout_report = filter_utterances(heldout, inventory)
        self.log.info("Training set: %s" % train_report)
        self.log.info("Held-out set: %s" % heldout_report)
        if not train: raise DataError("No training utterance is covered by the inventory.")
        lexicon = build_lexicon([s.transcript for s in train], inventory)
        # Noise augmentation of the training set #
        copies = cfg['corpus']['augment_copies']
        source = {s.id: s.id for s in train}
        if copies > 0:
            bank = load_noise_bank(self.combo.resolve(cfg['paths']['noise_bank']))
            profile = NoiseProfile(bank, cfg['corpus']['snr_low'],
                                   cfg['corpus']['snr_high'], cfg['corpus']['snr_mean'])
            source.update({"%s_noise%i" % (s.id, num): s.id for s in train for num in range(copies)})
            train = augment_dataset(train, profile, copies, self.seed)
            self.log.info("Augmented the training set to %i utterances." % len(train))
        # Features #
        every = train + heldout
        results = map_utterances(partial(extract_features, params=cfg['features']),
                                 every, self.workers, desc="Features")
        # Utterances too short for their symbol sequence at the reduced rate #
        n_states, too_short, kept = cfg['gmm']['n_states'], [], set()
        for segment, (plp, stacked) in zip(every, results):
            symbols, _ = transcript_to_targets(segment.transcript, inventory, lex['sil'])
            if stacked.n_frames < n_states * len(symbols):
                msg = "Utterance '%s' has %i frames for %i symbols, it is left out."
                warnings.warn(msg % (segment.id, stacked.n_frames, len(symbols)))
                too_short.append(segment.id)
                continue
            kept.add(segment.id)
            plp.save(self.path('plp_dir') / (segment.id + '.gafm'))
            stacked.save(self.path('stacked_dir') / (segment.id + '.gafm'))
        train   = [s for s in train if s.id in kept]
        heldout = [s for s in heldout if s.id in kept]
        # Write #
        inventory.save(self.path('inventory'))
        lexicon.save(self.path('lexicon'))
        rows = [(s.id, source[s.id], s.transcript) for s in train]
        pandas.DataFrame(rows, columns=['utt_id', 'source_id', 'transcript']).to_csv(
            self.path('train'), sep='\t', index=False)
        rows = [(s.id, s.id, s.transcript) for s in heldout]
        pandas.DataFrame(rows, columns=['utt_id', 'source_id', 'transcript']).to_csv(
            self.path('heldout'), sep='\t', index=False)
        report = {'loaded':            len(dataset),
                  'inventory_size':    len(inventory),
                  'lexicon_size':      len(lexicon),
                  'dropped_train':     train_report.dropped_ids,
                  'dropped_heldout':   heldout_report.dropped_ids,
                  'too_short':         too_short,
                  'train':             len(train),
                  'heldout':           len(heldout)}
        with open(self.path('report'), 'w', encoding='utf-8') as handle:
            simplejson.dump(report, handle, indent=4)
        self.log.info("Prepared %i training and %i held-out utterances." % (len(train), len(heldout)))
        return report
