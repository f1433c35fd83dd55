#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Run with pytest from the root of the repository:

    cd graphalign && pytest tests/test_hmm_gmm.py
"""

# Built-in modules #
import itertools

# Third party modules #
import numpy
import pytest

# Internal modules #
from graphalign.core.errors import DataError
from graphalign.features import FeatureMatrix
from graphalign.hmm_gmm import FrameAlignment, HmmGmmModel, read_alignments, write_alignments
from graphalign.hmm_gmm import flat_start_segment, flat_start_alignments, select_subset
from graphalign.hmm_gmm import train_em, viterbi_align, forced_viterbi, realign_loop
from graphalign.hmm_gmm.em import em_step, gmm_log_likelihood, split_largest, split_schedule
from graphalign.hmm_gmm.em import next_mixture_count
from graphalign.hmm_gmm.realign import growth_rounds
from graphalign.hmm_gmm.viterbi import alignment_log_likelihood

###############################################################################
def state_spans(alignment):
    """Length of every run of identical (symbol, state) pairs."""
    pairs = list(zip(alignment.symbols, alignment.states.tolist()))
    return [len(list(group)) for _, group in itertools.groupby(pairs)]

def all_paths(n_frames, n_states):
    """Every monotone path from state 0 to the last state."""
    for moves in itertools.product((0, 1), repeat=n_frames - 1):
        if sum(moves) != n_states - 1: continue
        yield numpy.concatenate([[0], numpy.cumsum(moves)])

def path_score(path, emissions, log_self, log_advance):
    score = emissions[0, path[0]]
    for t in range(1, len(path)):
        prev = path[t - 1]
        score += log_advance[prev] if path[t] > prev else log_self[prev]
        score += emissions[t, path[t]]
    return score

# Toy data: every state emits around its own mean, ten units apart #
STATE_MEANS = {('a', 0): 0.0,  ('a', 1): 10.0, ('a', 2): 20.0,
               ('b', 0): 30.0, ('b', 1): 40.0, ('b', 2): 50.0}

def toy_dataset(seed=0):
    rng = numpy.random.default_rng(seed)
    sequences = [['a', 'b'], ['b', 'a'], ['a', 'b', 'a'], ['b', 'b'], ['a']] * 4
    features, targets, truth = {}, {}, {}
    for num, symbols in enumerate(sequences):
        utt_id = "utt%02i" % num
        rows, states = [], []
        for symbol in symbols:
            for state in range(3):
                length = int(rng.integers(3, 5))
                rows += [STATE_MEANS[(symbol, state)]] * length
                states += [state] * length
        values = numpy.array(rows)[:, None] + 0.1 * rng.standard_normal((len(rows), 2))
        features[utt_id] = FeatureMatrix(values, 10.0, 25.0, 'plp')
        targets[utt_id]  = (symbols, list(range(len(symbols))))
        truth[utt_id]    = states
    return features, targets, truth

def toy_model(seed=0, n_mix=2, dims=2):
    rng = numpy.random.default_rng(seed)
    rows = 6
    weights = rng.dirichlet(numpy.ones(n_mix), size=rows)
    means = rng.standard_normal((rows, n_mix, dims))
    variances = rng.uniform(0.5, 2.0, size=(rows, n_mix, dims))
    p_self = rng.uniform(0.2, 0.8, size=rows)
    transitions = numpy.stack([p_self, 1 - p_self], axis=1)
    return HmmGmmModel(('a', 'b'), weights, means, variances, transitions,
                       numpy.full(dims, 1e-3))

###############################################################################
def test_flat_start_even():
    ali = flat_start_segment(12, ['a', 'b'])
    assert state_spans(ali) == [2] * 6
    assert ali.symbol_sequence == ['a', 'b']

def test_flat_start_remainder_goes_left():
    ali = flat_start_segment(13, ['a', 'b'])
    assert state_spans(ali) == [3, 2, 2, 2, 2, 2]

def test_flat_start_minimum():
    ali = flat_start_segment(3, ['a'])
    assert ali.states.tolist() == [0, 1, 2]

def test_flat_start_too_short():
    with pytest.raises(DataError):
        flat_start_segment(5, ['a', 'b'])
    features = {'short': FeatureMatrix(numpy.zeros((5, 2)), 10.0, 25.0, 'plp'),
                'long':  FeatureMatrix(numpy.zeros((6, 2)), 10.0, 25.0, 'plp')}
    targets = {'short': (['a', 'b'], [0, 1]), 'long': (['a', 'b'], [0, 1])}
    with pytest.warns(UserWarning, match="Excluded from the flat start"):
        alignments = flat_start_alignments(features, targets)
    assert [ali.utt_id for ali in alignments] == ['long']

def test_subset_is_seeded():
    ids = ["utt%03i" % i for i in range(200)]
    first = select_subset(ids, 0.06, seed=3)
    assert len(first) == 12
    assert first == select_subset(ids, 0.06, seed=3)
    assert first == sorted(first)
    assert select_subset(ids[:5], 0.06, seed=3) != []

###############################################################################
def test_split_schedule():
    assert split_schedule(14) == [1, 2, 4, 8, 14]
    assert split_schedule(1) == [1]

def test_split_largest_keeps_total_weight():
    w, mu, var = split_largest(numpy.array([1.0]), numpy.zeros((1, 2)),
                               numpy.ones((1, 2)), 3)
    assert len(w) == 3
    assert w.sum() == pytest.approx(1.0)

def test_single_gaussian_matches_sample_statistics():
    rng = numpy.random.default_rng(0)
    x = rng.normal([1.0, -2.0], [0.5, 3.0], size=(5000, 2))
    w, mu, var, _ = em_step(x, numpy.ones(1), numpy.zeros((1, 2)),
                            numpy.ones((1, 2)), numpy.full(2, 1e-6))
    numpy.testing.assert_allclose(mu[0], x.mean(axis=0), rtol=0.02)
    numpy.testing.assert_allclose(var[0], x.var(axis=0), rtol=0.02)

def test_two_clusters():
    rng = numpy.random.default_rng(1)
    x = numpy.concatenate([rng.normal(-5, 1, size=(3000, 1)),
                           rng.normal(5, 1, size=(7000, 1))])
    w, mu, var = split_largest(numpy.ones(1), x.mean(axis=0)[None],
                               x.var(axis=0)[None], 2)
    for _ in range(30):
        w, mu, var, _ = em_step(x, w, mu, var, numpy.full(1, 1e-6))
    order = numpy.argsort(mu[:, 0])
    numpy.testing.assert_allclose(w[order], [0.3, 0.7], atol=0.02)
    numpy.testing.assert_allclose(mu[order, 0], [-5, 5], atol=0.1)
    resp = numpy.exp(gmm_log_likelihood(x, w, mu, var))
    resp /= resp.sum(axis=1, keepdims=True)
    indicator = (numpy.arange(10000) >= 3000).astype(float)
    assert numpy.mean(numpy.abs(resp[:, order[1]] - indicator) < 0.01) > 0.99

def test_em_is_monotone():
    features, targets, _ = toy_dataset()
    alignments = flat_start_alignments(features, targets)
    model, history = train_em(features, alignments, ('a', 'b'), target_mixtures=3,
                              em_iters_per_split=5)
    assert sorted(history['mixtures'].unique()) == [1, 2, 3]
    for _, group in history.groupby('mixtures'):
        ll = group.sort_values('iteration')['log_likelihood'].values
        assert numpy.all(numpy.diff(ll) >= -1e-6 * numpy.abs(ll[:-1]))
    # Model invariants #
    numpy.testing.assert_allclose(model.weights.sum(axis=1), 1.0, atol=1e-9)
    numpy.testing.assert_allclose(model.transitions.sum(axis=1), 1.0, atol=1e-12)
    used = model.weights > 0
    assert numpy.all(model.variances[used] >= model.variance_floor - 1e-15)

def test_em_is_monotone_up_to_fourteen_mixtures():
    rng = numpy.random.default_rng(7)
    centers = rng.uniform(-6, 6, size=(5, 3))
    values = centers[rng.integers(0, 5, size=500)] + rng.standard_normal((500, 3))
    features = {'utt': FeatureMatrix(values, 10.0, 25.0, 'plp')}
    alignment = FrameAlignment('utt', ['a'] * 500, numpy.zeros(500), numpy.zeros(500))
    model, history = train_em(features, [alignment], ('a',), target_mixtures=14,
                              em_iters_per_split=20, n_states=1)
    assert sorted(history['mixtures'].unique()) == [1, 2, 4, 8, 14]
    for _, group in history.groupby('mixtures'):
        ll = group.sort_values('iteration')['log_likelihood'].values
        assert len(ll) == 21
        assert numpy.all(numpy.diff(ll) >= -1e-6 * numpy.abs(ll[:-1]))
    assert model.n_mix == 14

def test_next_mixture_count():
    assert [next_mixture_count(m, 14) for m in (1, 2, 4, 8, 14)] == [2, 4, 8, 14, 14]
    assert next_mixture_count(2, None) == 2
    assert next_mixture_count(8, 4) == 8
    assert growth_rounds(1, 14) == 4
    assert growth_rounds(14, 14) == 0

def test_em_grows_an_existing_model():
    features, targets, _ = toy_dataset()
    alignments = flat_start_alignments(features, targets)
    model, _ = train_em(features, alignments, ('a', 'b'), target_mixtures=1)
    grown, history = train_em(features, alignments, ('a', 'b'), target_mixtures=2,
                              init_model=model)
    assert grown.n_mix == 2
    assert history['mixtures'].unique().tolist() == [2]
    numpy.testing.assert_allclose(grown.weights.sum(axis=1), 1.0, atol=1e-9)
    numpy.testing.assert_array_equal(grown.variance_floor, model.variance_floor)
    kept, _ = train_em(features, alignments, ('a', 'b'), target_mixtures=1,
                       init_model=model)
    assert kept.n_mix == 1

def test_state_without_frames():
    features, targets, _ = toy_dataset()
    alignments = flat_start_alignments(features, targets)
    with pytest.warns(UserWarning, match="has no aligned frames"):
        model, _ = train_em(features, alignments, ('a', 'b', 'c'), target_mixtures=1,
                            em_iters_per_split=1)
    assert numpy.all(numpy.isfinite(model.variances))

def test_em_needs_frames():
    with pytest.raises(DataError):
        train_em({}, [], ('a',))

###############################################################################
def test_viterbi_equals_exhaustive_search():
    rng = numpy.random.default_rng(2)
    for n_frames, n_states in [(3, 3), (5, 3), (8, 6), (10, 6), (10, 9)]:
        emissions   = rng.standard_normal((n_frames, n_states))
        log_self    = numpy.log(rng.uniform(0.1, 0.9, n_states))
        log_advance = numpy.log(rng.uniform(0.1, 0.9, n_states))
        path, score = forced_viterbi(emissions, log_self, log_advance)
        best = max(all_paths(n_frames, n_states),
                   key=lambda p: path_score(p, emissions, log_self, log_advance))
        assert score == pytest.approx(path_score(best, emissions, log_self, log_advance))
        assert path.tolist() == best.tolist()

def test_viterbi_on_random_models():
    rng = numpy.random.default_rng(6)
    for trial in range(200):
        n_symbols = int(rng.integers(1, 4))
        symbols = [('a', 'b', 'c')[i] for i in rng.permutation(3)[:n_symbols]]
        n_frames = int(rng.integers(3 * n_symbols, 11))
        weights = rng.dirichlet(numpy.ones(2), size=9)
        means = 2.0 * rng.standard_normal((9, 2, 2))
        variances = rng.uniform(0.3, 3.0, size=(9, 2, 2))
        p_self = rng.uniform(0.05, 0.95, size=9)
        model = HmmGmmModel(('a', 'b', 'c'), weights, means, variances,
                            numpy.stack([p_self, 1 - p_self], axis=1), numpy.full(2, 1e-3))
        fm = FeatureMatrix(rng.standard_normal((n_frames, 2)), 10.0, 25.0, 'plp')
        ali, score = viterbi_align(model, fm, symbols)
        rows = model.rows_of(symbols)
        emissions = model.state_log_likelihoods(fm.values, rows)
        log_trans = model.log_transitions[rows]
        paths = list(all_paths(n_frames, len(rows)))
        scores = [path_score(p, emissions, log_trans[:, 0], log_trans[:, 1]) for p in paths]
        best = paths[int(numpy.argmax(scores))]
        assert abs(score - max(scores)) < 1e-9
        assert (rows[best] == numpy.array([model.row(s, k) for s, k in
                                           zip(ali.symbols, ali.states)])).all()

def test_viterbi_with_model_equals_exhaustive_search():
    model = toy_model()
    rng = numpy.random.default_rng(4)
    fm = FeatureMatrix(rng.standard_normal((8, 2)), 10.0, 25.0, 'plp')
    ali, score = viterbi_align(model, fm, ['a', 'b'], [0, 1])
    rows = model.rows_of(['a', 'b'])
    emissions = model.state_log_likelihoods(fm.values, rows)
    log_trans = model.log_transitions[rows]
    best = max(path_score(p, emissions, log_trans[:, 0], log_trans[:, 1])
               for p in all_paths(8, 6))
    assert score == pytest.approx(best)
    assert alignment_log_likelihood(model, fm, ali) == pytest.approx(score)
    assert ali.symbol_sequence == ['a', 'b']
    assert ali.validate(['a', 'b'])

def test_viterbi_follows_forced_path():
    states = numpy.array([0, 0, 1, 2, 2, 2, 3, 4, 5])
    emissions = numpy.full((9, 6), -1e6)
    emissions[numpy.arange(9), states] = 0.0
    path, _ = forced_viterbi(emissions, numpy.log(numpy.full(6, 0.5)),
                             numpy.log(numpy.full(6, 0.5)))
    assert path.tolist() == states.tolist()

def test_viterbi_ties_stay():
    # Every path scores zero, staying wins each comparison after the first move #
    path, _ = forced_viterbi(numpy.zeros((4, 2)), numpy.zeros(2), numpy.zeros(2))
    assert path.tolist() == [0, 1, 1, 1]

def test_viterbi_infeasible():
    model = toy_model()
    fm = FeatureMatrix(numpy.zeros((5, 2)), 10.0, 25.0, 'plp')
    with pytest.raises(DataError) as excinfo:
        viterbi_align(model, fm, ['a', 'b'])
    assert "too few for 2 symbols" in str(excinfo.value)

###############################################################################
def test_zero_rounds_is_identity():
    features, targets, _ = toy_dataset()
    alignments = flat_start_alignments(features, targets)
    model, _ = train_em(features, alignments, ('a', 'b'), target_mixtures=1)
    new_model, new_alignments, history = realign_loop(model, features, targets,
                                                      alignments, rounds=0)
    assert new_model is model
    assert new_alignments is alignments
    assert history.empty

def test_realignment_converges():
    features, targets, truth = toy_dataset()
    alignments = flat_start_alignments(features, targets)
    model, _ = train_em(features, alignments, ('a', 'b'), target_mixtures=1,
                        em_iters_per_split=2)
    model, alignments, history = realign_loop(model, features, targets, alignments,
                                              rounds=4, em_iters_per_split=2)
    ll = history['log_likelihood'].values
    assert numpy.all(numpy.diff(ll) >= -1e-6 * numpy.abs(ll[:-1]))
    for ali in alignments:
        assert ali.states.tolist() == truth[ali.utt_id]
        assert ali.validate(targets[ali.utt_id][0])
    # Two more rounds from the converged model change nothing #
    _, again, _ = realign_loop(model, features, targets, alignments,
                               rounds=2, em_iters_per_split=2)
    assert again == alignments

def test_realignment_grows_mixtures():
    features, targets, truth = toy_dataset()
    alignments = flat_start_alignments(features, targets)
    model, _ = train_em(features, alignments, ('a', 'b'), target_mixtures=1,
                        em_iters_per_split=2)
    rounds = growth_rounds(model.n_mix, 4) + 2
    model, alignments, history = realign_loop(model, features, targets, alignments,
                                              rounds=rounds, em_iters_per_split=2,
                                              target_mixtures=4)
    assert list(history.columns) == ['round', 'mixtures', 'log_likelihood']
    assert history['mixtures'].tolist() == [1, 2, 4, 4]
    assert model.n_mix == 4
    for ali in alignments:
        assert ali.states.tolist() == truth[ali.utt_id]

###############################################################################
def test_model_file(tmp_path):
    model = toy_model()
    loaded = HmmGmmModel.load(model.save(tmp_path / 'model.gahg'))
    assert loaded.symbols == model.symbols
    numpy.testing.assert_array_equal(loaded.means, model.means)
    numpy.testing.assert_array_equal(loaded.transitions, model.transitions)

def test_alignment_file(tmp_path):
    first  = flat_start_segment(6, ['a', '<space>'], [0, -1], utt_id='u1')
    second = flat_start_segment(7, ['b', 'a'], [0, 0], utt_id='u2')
    path = write_alignments(tmp_path / 'gmm.ali', [first, second])
    assert path.read_text().split('\n')[0] == "u1 0 a 0 0"
    assert read_alignments(path) == [first, second]

def test_downsample_takes_majority():
    ali = FrameAlignment('u', ['a', 'a', 'b', 'b', 'b', 'c', 'c'],
                         [0, 1, 0, 1, 2, 0, 0], [0, 0, 0, 0, 0, 1, 1])
    low = ali.downsample(3)
    assert low.symbols == ('a', 'b', 'c')
    assert low.states.tolist() == [0, 1, 0]
    assert low.frame_shift_ms == 30.0
    assert len(low.fit_length(5)) == 5
