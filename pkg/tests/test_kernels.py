import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from punctkit import kernels


def brute_force_cost(a, b):
    """Minimum edit cost over every monotone partial matching of a and b."""
    best = len(a) + len(b)
    for k in range(min(len(a), len(b)) + 1):
        for src in itertools.combinations(range(len(a)), k):
            for hyp in itertools.combinations(range(len(b)), k):
                subs = sum(a[i] != b[j] for i, j in zip(src, hyp))
                best = min(best, subs + (len(a) - k) + (len(b) - k))
    return best


def mapping_cost(a, b, m):
    pairs = [(i, int(j)) for i, j in enumerate(m) if j >= 0]
    hyp = [j for _, j in pairs]
    assert hyp == sorted(set(hyp)), "alignment must be monotone and injective"
    assert all(0 <= j < len(b) for j in hyp)
    subs = sum(a[i] != b[j] for i, j in pairs)
    return subs + (len(a) - len(pairs)) + (len(b) - len(pairs))


@settings(max_examples=400, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=5), st.lists(st.integers(0, 3), max_size=5))
def test_alignment_is_minimal(a, b):
    for mod in kernels.backends().values():
        m = mod.align_tokens(a, b)
        assert len(m) == len(a)
        assert mapping_cost(a, b, m) == brute_force_cost(a, b)


def test_alignment_examples(backend):
    assert backend.align_tokens([1, 2, 3], [1, 2, 3]).tolist() == [0, 1, 2]
    assert backend.align_tokens([1, 2, 3, 4, 5], [1, 2, 9, 3, 4, 5]).tolist() == [0, 1, 3, 4, 5]
    assert backend.align_tokens([1, 2], []).tolist() == [-1, -1]
    assert backend.align_tokens([], [1]).tolist() == []


def test_backends_agree_on_alignment():
    mods = list(kernels.backends().values())
    rng = random.Random(0)
    for _ in range(300):
        a = [rng.randrange(6) for _ in range(rng.randint(0, 30))]
        b = [rng.randrange(6) for _ in range(rng.randint(0, 30))]
        outs = {m.align_tokens(a, b).tobytes() for m in mods}
        assert len(outs) == 1


def _problem(seed, n_feats=40, n_classes=4, n_sents=30):
    rng = np.random.default_rng(seed)
    sents = []
    for _ in range(n_sents):
        n = int(rng.integers(1, 9))
        counts = rng.integers(1, 6, size=n)
        indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        ids = rng.integers(0, n_feats - n_classes - 1, size=int(indptr[-1])).astype(np.int64)
        gold = rng.integers(0, n_classes, size=n).astype(np.int64)
        sents.append((indptr, ids, gold))
    prev_ids = np.arange(n_feats - n_classes - 1, n_feats, dtype=np.int64)
    return sents, prev_ids, (n_feats, n_classes)


def _train(mod, sents, prev_ids, shape, epochs=3):
    w, t, st_ = (np.zeros(shape, dtype=np.int64) for _ in range(3))
    step = 0
    errs = []
    for _ in range(epochs):
        for indptr, ids, gold in sents:
            step, e = mod.train_sentence(indptr, ids, prev_ids, gold, w, t, st_, step)
            errs.append(e)
    return w, t, st_, step, errs


@pytest.mark.parametrize("seed", range(5))
def test_backends_agree_on_training(seed):
    sents, prev_ids, shape = _problem(seed)
    results = [_train(m, sents, prev_ids, shape) for m in kernels.backends().values()]
    ref = results[0]
    for other in results[1:]:
        for x, y in zip(ref, other):
            assert np.array_equal(np.asarray(x), np.asarray(y))
    for mod in kernels.backends().values():
        decoded = [mod.decode_sentence(ip, ids, prev_ids, ref[1]).tolist() for ip, ids, _ in sents]
        assert decoded == [kernels.backends()["python"].decode_sentence(ip, ids, prev_ids, ref[1]).tolist()
                           for ip, ids, _ in sents]


def test_lazy_totals_equal_eager_sum(backend):
    """totals must equal the sum of the weight table after every token step."""
    sents, prev_ids, shape = _problem(11)
    w, t, st_ = (np.zeros(shape, dtype=np.int64) for _ in range(3))
    eager = np.zeros(shape, dtype=np.int64)
    step = 0
    for indptr, ids, gold in sents:
        for i in range(len(gold)):
            # feed one token at a time so the eager sum can be taken after each step
            one_ptr = np.array([0, indptr[i + 1] - indptr[i]], dtype=np.int64)
            one_ids = ids[indptr[i]:indptr[i + 1]]
            step, _ = backend.train_sentence(one_ptr, one_ids, prev_ids, gold[i:i + 1], w, t, st_, step)
            eager += w
    t += (step - st_) * w
    assert np.array_equal(t, eager)


def test_decode_ties_go_to_lowest_class(backend):
    w = np.zeros((3, 4), dtype=np.int64)
    out = backend.decode_sentence(np.array([0, 1, 2], dtype=np.int64), np.array([0, 1], dtype=np.int64),
                                  np.array([2, 2, 2, 2, 2], dtype=np.int64), w)
    assert out.tolist() == [0, 0]


def test_single_token_update(backend):
    w, t, st_ = (np.zeros((3, 2), dtype=np.int64) for _ in range(3))
    step, err = backend.train_sentence(np.array([0, 1], dtype=np.int64), np.array([0], dtype=np.int64),
                                       np.array([2, 2, 2], dtype=np.int64), np.array([1], dtype=np.int64),
                                       w, t, st_, 0)
    assert (step, err) == (1, 1)
    assert w.tolist() == [[-1, 1], [0, 0], [-1, 1]]
    t += (step - st_) * w
    assert np.array_equal(t, w)  # one example seen once: average == final
