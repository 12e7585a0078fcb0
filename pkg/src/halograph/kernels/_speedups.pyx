# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scoring kernels.

Mirrors ``halograph.kernels._purepy`` operation for operation; the
pure-Python module is the reference and this one exists only for
speed.  Any semantic change must land in both.
"""

from libc.math cimport exp, log

import numpy as np

from halograph.errors import DegenerateDistributionError


def token_uncertainty_batch(double[:, ::1] topk, long long[::1] positions,
                            long long passage_length):
    cdef Py_ssize_t n = topk.shape[0]
    cdef Py_ssize_t k = topk.shape[1]
    cdef double length = <double> passage_length
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double biggest, total, mean, spread, d, denom, p
    for i in range(n):
        biggest = topk[i, 0]
        total = 0.0
        for j in range(k):
            p = topk[i, j]
            if p > biggest:
                biggest = p
            total += p
        mean = total / k
        spread = 0.0
        for j in range(k):
            d = topk[i, j] - mean
            spread += d * d
        denom = biggest + spread / k
        if denom <= 0.0:
            raise DegenerateDistributionError(
                "token top-k probabilities are all zero; "
                "uncertainty denominator vanishes"
            )
        out[i] = (1.0 + exp(<double> positions[i] / length - 1.0)) / denom
    return out_arr


def interpolated_quantile(double[::1] values, double level):
    xs_arr = np.sort(np.asarray(values))
    cdef double[::1] xs = xs_arr
    cdef Py_ssize_t n = xs.shape[0]
    if n == 1:
        return xs[0]
    cdef double h = (n - 1) * level
    cdef Py_ssize_t lo = <Py_ssize_t> h
    if lo >= n - 1:
        return xs[n - 1]
    return xs[lo] + (h - lo) * (xs[lo + 1] - xs[lo])


def average_ranks(double[::1] values):
    cdef Py_ssize_t n = values.shape[0]
    order_arr = np.argsort(np.asarray(values), kind="stable")
    cdef long[::1] order = order_arr
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] ranks = out_arr
    cdef Py_ssize_t i = 0, j, t
    cdef double shared
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = (i + j + 2) / 2.0
        for t in range(i, j + 1):
            ranks[order[t]] = shared
        i = j + 1
    return out_arr


def rank_auc(double[::1] scores, long long[::1] labels):
    cdef double[::1] ranks = average_ranks(scores)
    cdef Py_ssize_t n = scores.shape[0]
    cdef Py_ssize_t positives = 0
    cdef double rank_sum = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        if labels[i]:
            positives += 1
            rank_sum += ranks[i]
    cdef Py_ssize_t negatives = n - positives
    return (rank_sum - positives * (positives + 1) / 2.0) / (positives * negatives)


def entropy_batch(double[:, ::1] topk):
    cdef Py_ssize_t n = topk.shape[0]
    cdef Py_ssize_t k = topk.shape[1]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double acc, p
    for i in range(n):
        acc = 0.0
        for j in range(k):
            p = topk[i, j]
            if p > 0.0:
                acc -= p * log(p)
        out[i] = acc
    return out_arr
