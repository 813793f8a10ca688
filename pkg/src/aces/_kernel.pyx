# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled similarity kernels.

Same contract as aces._kernel_py: technique 0 = cosine dot product,
1 = 1 / (1 + euclidean distance). The max-mean reduction is fused so the
similarity matrix is never materialized.
"""

from libc.math cimport sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

IMPLEMENTATION = "compiled"


cdef inline double _pair_similarity(const double[:, ::1] cand,
                                    const double[:, ::1] ref,
                                    Py_ssize_t i, Py_ssize_t j,
                                    int technique) noexcept nogil:
    cdef Py_ssize_t k
    cdef Py_ssize_t dim = cand.shape[1]
    cdef double acc = 0.0
    cdef double diff
    if technique == 0:
        for k in range(dim):
            acc += cand[i, k] * ref[j, k]
        return acc
    for k in range(dim):
        diff = cand[i, k] - ref[j, k]
        acc += diff * diff
    return 1.0 / (1.0 + sqrt(acc))


def similarity_matrix(const double[:, ::1] cand, const double[:, ::1] ref, int technique):
    """Pairwise similarities, shape (len(cand), len(ref))."""
    cdef Py_ssize_t m = cand.shape[0]
    cdef Py_ssize_t n = ref.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] view = out
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(m):
            for j in range(n):
                view[i, j] = _pair_similarity(cand, ref, i, j, technique)
    return out


def pr_re(const double[:, ::1] cand, const double[:, ::1] ref, int technique):
    """Max-mean reduction over the similarity matrix.

    Precision averages, over reference tokens, the best-matching candidate
    similarity; recall averages, over candidate tokens, the best-matching
    reference similarity.
    """
    cdef Py_ssize_t m = cand.shape[0]
    cdef Py_ssize_t n = ref.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] row_max = np.full(m, -np.inf)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] col_max = np.full(n, -np.inf)
    cdef double[::1] row_view = row_max
    cdef double[::1] col_view = col_max
    cdef Py_ssize_t i, j
    cdef double s, precision, recall
    with nogil:
        for i in range(m):
            for j in range(n):
                s = _pair_similarity(cand, ref, i, j, technique)
                if s > row_view[i]:
                    row_view[i] = s
                if s > col_view[j]:
                    col_view[j] = s
        precision = 0.0
        for j in range(n):
            precision += col_view[j]
        precision /= n
        recall = 0.0
        for i in range(m):
            recall += row_view[i]
        recall /= m
    return precision, recall
