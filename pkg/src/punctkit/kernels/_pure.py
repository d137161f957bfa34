"""Reference implementations of the hot loops.

Every function here has a twin in ``_fast.pyx`` with identical outputs.
All perceptron arithmetic is int64, so both backends agree bit for bit.
"""
from __future__ import annotations

import numpy as np

NONE = -1


def align_tokens(a, b) -> np.ndarray:
    """Minimal-edit monotone alignment of two integer token streams.

    Returns an int64 array ``m`` of length ``len(a)`` with ``m[i]`` the index
    in ``b`` aligned to ``a[i]`` (match or substitution) or ``-1``.
    Costs: match 0, substitution 1, insertion 1, deletion 1.
    Backtrace prefers match, then substitution, then deletion, then insertion.
    """
    a = [int(x) for x in a]
    b = [int(x) for x in b]
    n, m = len(a), len(b)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for j in range(m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        row, prev = dist[i], dist[i - 1]
        row[0] = i
        ai = a[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1] + (0 if ai == b[j - 1] else 1)
            if prev[j] + 1 < best:
                best = prev[j] + 1
            if row[j - 1] + 1 < best:
                best = row[j - 1] + 1
            row[j] = best

    out = np.full(n, NONE, dtype=np.int64)
    i, j = n, m
    while i > 0 or j > 0:
        d = dist[i][j]
        if i > 0 and j > 0:
            if a[i - 1] == b[j - 1] and d == dist[i - 1][j - 1]:
                out[i - 1] = j - 1
                i -= 1
                j -= 1
                continue
            if d == dist[i - 1][j - 1] + 1:
                out[i - 1] = j - 1
                i -= 1
                j -= 1
                continue
        if i > 0 and d == dist[i - 1][j] + 1:
            i -= 1
            continue
        j -= 1
    return out


def train_sentence(indptr, ids, prev_ids, gold, weights, totals, stamps, step: int):
    """One greedy perceptron pass over a sentence, updating in place.

    ``indptr``/``ids`` hold each token's static feature ids (CSR layout),
    ``prev_ids[k]`` is the feature id for previous label ``k - 1`` (``k = 0``
    is the sentence-start sentinel). Returns ``(step, n_errors)``.
    """
    n = len(indptr) - 1
    prev = 0
    errors = 0
    for i in range(n):
        pf = prev_ids[prev]
        feats = np.append(ids[indptr[i]:indptr[i + 1]], pf)
        scores = weights[feats].sum(axis=0)
        pred = int(np.argmax(scores))
        g = int(gold[i])
        if pred != g:
            for c in (g, pred):
                totals[feats, c] += (step - stamps[feats, c]) * weights[feats, c]
                stamps[feats, c] = step
            # add.at counts repeated feature ids once per occurrence
            np.add.at(weights, (feats, g), 1)
            np.add.at(weights, (feats, pred), -1)
            errors += 1
        step += 1
        prev = pred + 1
    return step, errors


def decode_sentence(indptr, ids, prev_ids, weights) -> np.ndarray:
    """Greedy left-to-right argmax decoding; ties go to the lowest class index."""
    n = len(indptr) - 1
    out = np.empty(n, dtype=np.int64)
    prev = 0
    for i in range(n):
        feats = np.append(ids[indptr[i]:indptr[i + 1]], prev_ids[prev])
        pred = int(np.argmax(weights[feats].sum(axis=0)))
        out[i] = pred
        prev = pred + 1
    return out
