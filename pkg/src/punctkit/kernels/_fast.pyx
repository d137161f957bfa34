# Compiled twins of the functions in _pure.py. Keep the two in lockstep.

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef cnp.int64_t i64


def align_tokens(a, b):
    cdef i64[::1] av = np.ascontiguousarray(a, dtype=np.int64)
    cdef i64[::1] bv = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t n = av.shape[0], m = bv.shape[0]
    cdef Py_ssize_t w = m + 1
    cdef Py_ssize_t i, j
    cdef int best, d
    cdef int *dist = <int *> malloc((n + 1) * w * sizeof(int))
    if dist == NULL:
        raise MemoryError()
    out = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] ov = out
    try:
        for j in range(m + 1):
            dist[j] = <int> j
        for i in range(1, n + 1):
            dist[i * w] = <int> i
            for j in range(1, m + 1):
                best = dist[(i - 1) * w + j - 1] + (0 if av[i - 1] == bv[j - 1] else 1)
                if dist[(i - 1) * w + j] + 1 < best:
                    best = dist[(i - 1) * w + j] + 1
                if dist[i * w + j - 1] + 1 < best:
                    best = dist[i * w + j - 1] + 1
                dist[i * w + j] = best

        i = n
        j = m
        while i > 0 or j > 0:
            d = dist[i * w + j]
            if i > 0 and j > 0:
                if av[i - 1] == bv[j - 1] and d == dist[(i - 1) * w + j - 1]:
                    ov[i - 1] = j - 1
                    i -= 1
                    j -= 1
                    continue
                if d == dist[(i - 1) * w + j - 1] + 1:
                    ov[i - 1] = j - 1
                    i -= 1
                    j -= 1
                    continue
            if i > 0 and d == dist[(i - 1) * w + j] + 1:
                i -= 1
                continue
            j -= 1
    finally:
        free(dist)
    return out


cdef inline Py_ssize_t _argmax_row_sum(const i64[::1] ids, Py_ssize_t lo, Py_ssize_t hi,
                                       i64 pf, i64[:, ::1] weights, i64 *scores) nogil:
    cdef Py_ssize_t k, c, nc = weights.shape[1]
    cdef i64 f
    for c in range(nc):
        scores[c] = weights[pf, c]
    for k in range(lo, hi):
        f = ids[k]
        for c in range(nc):
            scores[c] += weights[f, c]
    cdef Py_ssize_t best = 0
    for c in range(1, nc):
        if scores[c] > scores[best]:
            best = c
    return best


cdef inline void _touch(i64 f, Py_ssize_t c, i64 step, i64[:, ::1] weights,
                        i64[:, ::1] totals, i64[:, ::1] stamps) nogil:
    totals[f, c] += (step - stamps[f, c]) * weights[f, c]
    stamps[f, c] = step


def train_sentence(indptr, ids, prev_ids, gold, weights, totals, stamps, i64 step):
    cdef const i64[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const i64[::1] iv = np.ascontiguousarray(ids, dtype=np.int64)
    cdef const i64[::1] pv = np.ascontiguousarray(prev_ids, dtype=np.int64)
    cdef const i64[::1] gv = np.ascontiguousarray(gold, dtype=np.int64)
    cdef i64[:, ::1] W = weights
    cdef i64[:, ::1] T = totals
    cdef i64[:, ::1] S = stamps
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef Py_ssize_t nc = W.shape[1]
    cdef Py_ssize_t i, k, pred, g
    cdef i64 prev = 0, pf, f
    cdef long errors = 0
    cdef i64 *scores = <i64 *> malloc(nc * sizeof(i64))
    if scores == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                pf = pv[prev]
                pred = _argmax_row_sum(iv, ip[i], ip[i + 1], pf, W, scores)
                g = <Py_ssize_t> gv[i]
                if pred != g:
                    for k in range(ip[i], ip[i + 1] + 1):
                        f = iv[k] if k < ip[i + 1] else pf
                        _touch(f, g, step, W, T, S)
                        _touch(f, pred, step, W, T, S)
                        W[f, g] += 1
                        W[f, pred] -= 1
                    errors += 1
                step += 1
                prev = pred + 1
    finally:
        free(scores)
    return step, errors


def decode_sentence(indptr, ids, prev_ids, weights):
    cdef const i64[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const i64[::1] iv = np.ascontiguousarray(ids, dtype=np.int64)
    cdef const i64[::1] pv = np.ascontiguousarray(prev_ids, dtype=np.int64)
    cdef i64[:, ::1] W = np.ascontiguousarray(weights, dtype=np.int64)
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef Py_ssize_t nc = W.shape[1]
    cdef Py_ssize_t i, pred
    cdef i64 prev = 0
    out = np.empty(n, dtype=np.int64)
    cdef i64[::1] ov = out
    cdef i64 *scores = <i64 *> malloc(nc * sizeof(i64))
    if scores == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                pred = _argmax_row_sum(iv, ip[i], ip[i + 1], pv[prev], W, scores)
                ov[i] = pred
                prev = pred + 1
    finally:
        free(scores)
    return out
