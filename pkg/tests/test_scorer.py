import random

import pytest

from _gen import random_op_sets
from oracles import prf, set_counts
from punctkit.corpus import Pair, depunctuate
from punctkit.labels import INITIAL, LabeledSequence, MarkInsert, RestorationOp, derive_labels, labels_to_ops
from punctkit.metrics import TaskScore, micro
from punctkit.scorer import (AlignmentOutcome, align_hypothesis, align_tokens, score_corpus, score_pair,
                             score_restoration)

FAKER_TARGET = ('Lee "Faker" Sang-hyeok (Hangul: 이상혁) is a League of Legends esports player, '
                'currently mid laner and part owner at T1.')


def exact(n):
    return align_tokens(["w"] * n, ["w"] * n)


def gold_of(target, pid="g"):
    return derive_labels(Pair(pid, depunctuate(target), target))


def test_align_hypothesis_examples():
    a = align_hypothesis("t1", "T1.")
    assert a.exact and a.mapping == ((0, 0),)
    a = align_hypothesis("a b c d e", "A b x c d e")
    assert not a.exact and a.unmatched_hyp == (2,)
    assert a.mapping == ((0, 0), (1, 1), (2, 3), (3, 4), (4, 5))
    a = align_hypothesis("a b", "")
    assert a.mapping == ((0, None), (1, None))


def test_score_examples():
    s = score_restoration({RestorationOp(0, INITIAL), RestorationOp(4, MarkInsert("TRAILING", "PERIOD"))},
                          {RestorationOp(0, INITIAL)}, exact(5))
    assert (s.tp, s.fp, s.fn) == (1, 0, 1)
    assert (s.precision, s.recall) == (1.0, 0.5)
    assert s.f1 == pytest.approx(2 / 3)
    e = score_restoration(set(), set(), exact(3))
    assert (e.precision, e.recall, e.f1) == (1.0, 1.0, 1.0)
    only_pred = score_restoration(set(), {RestorationOp(0, INITIAL)}, exact(1))
    assert (only_pred.precision, only_pred.recall, only_pred.f1) == (0.0, 0.0, 0.0)


def test_perfect_and_noop_hypotheses():
    g = gold_of(FAKER_TARGET)
    s = score_pair(g, FAKER_TARGET)
    assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0)
    noop = score_pair(g, depunctuate(FAKER_TARGET))
    assert (noop.tp, noop.fp, noop.fn) == (0, 0, len(labels_to_ops(g)))
    assert (noop.precision, noop.recall, noop.f1) == (0.0, 0.0, 0.0)


def test_mismatched_tokens_are_wrong():
    g = gold_of("Alpha beta, gamma.")
    # "gamma" changed to "Gama." : its CAP/PERIOD ops are fp, gold PERIOD is fn
    s = score_pair(g, "Alpha beta, Gama.")
    assert (s.tp, s.fp, s.fn) == (2, 2, 1)
    # a hallucinated extra word: its ops are fp, the rest still align
    s = score_pair(g, "Alpha beta, Extra gamma.")
    assert (s.tp, s.fp, s.fn) == (3, 1, 0)


def test_unencodable_hyp_token_is_mismatched():
    g = gold_of("ǆemal went.")
    s = score_pair(g, "ǅemal went.")
    assert s.tp == 1 and s.fn == 0 and s.fp == 0


def test_corpus_micro_average_and_missing():
    g1, g2 = gold_of("A b.", "one"), gold_of("C d e.", "two")
    total = score_corpus([g1, g2], {"one": "A b.", "two": "C d e"})
    assert (total.tp, total.fp, total.fn, total.missing) == (3, 0, 1, 0)
    missing = score_corpus([g1, g2], {"one": "A b."})
    assert (missing.tp, missing.fn, missing.missing) == (2, 2, 1)
    empty = score_corpus([g1, g2], {"one": "", "two": ""})
    assert (empty.precision, empty.recall) == (0.0, 0.0)
    assert micro([TaskScore(1, 0, 0), TaskScore(1, 0, 2)]) == TaskScore(2, 0, 2)
    m = micro([TaskScore(1, 0, 0), TaskScore(1, 0, 2)])
    assert (m.precision, m.recall) == (1.0, 0.5)


def test_labeled_sequence_hypothesis():
    g = gold_of("Hello world.")
    hyp = LabeledSequence("g", g.tokens, g.labels)
    assert score_pair(g, hyp).f1 == 1.0


def test_per_category_sums_to_total():
    g = gold_of(FAKER_TARGET)
    s = score_pair(g, 'Lee Faker sang-hyeok (hangul: 이상혁) is a league of Legends esports player. Currently')
    cats = s.per_category.values()
    assert sum(c.tp for c in cats) == s.tp
    assert sum(c.fp for c in cats) == s.fp
    assert sum(c.fn for c in cats) == s.fn


@pytest.mark.parametrize("seed", range(20))
def test_symmetry_monotonicity_bounds(seed):
    rng = random.Random(seed)
    n, gold, pred = random_op_sets(rng)
    s = score_restoration(gold, pred, exact(n))
    t = score_restoration(pred, gold, exact(n))
    assert (s.precision, s.recall) == (t.recall, t.precision)
    assert s.tp <= min(len(gold), len(pred))
    assert all(0 <= x <= 1 for x in (s.precision, s.recall, s.f1))
    for op in gold - pred:
        assert score_restoration(gold, pred | {op}, exact(n)).recall >= s.recall
    extra = {o for o in (random_op_sets(rng)[1]) if o not in gold and o.index < n}
    for op in extra:
        assert score_restoration(gold, pred | {op}, exact(n)).precision <= s.precision


def test_oracle_small_sample():
    rng = random.Random(99)
    for _ in range(200):
        n, gold, pred = random_op_sets(rng)
        s = score_restoration(gold, pred, exact(n))
        assert (s.tp, s.fp, s.fn) == set_counts(gold, pred)
        assert (s.precision, s.recall, s.f1) == tuple(float(x) for x in prf(*set_counts(gold, pred)))


def test_alignment_outcome_maps_only_clean_tokens():
    a = AlignmentOutcome(((0, 0), (1, 1), (2, None)), (2,), False, frozenset({1}))
    assert a.hyp_to_source() == {0: 0}
