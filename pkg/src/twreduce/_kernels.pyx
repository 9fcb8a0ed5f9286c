# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2) kernels; same contract as ``_kernels_py``."""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, realloc, free
from libc.string cimport memset, memcpy


cdef extern from *:
    int __builtin_clzll(unsigned long long) nogil


cdef struct Basis:
    Py_ssize_t words
    Py_ssize_t ncols
    Py_ssize_t rank
    Py_ssize_t cap
    uint64_t *rows
    int64_t *piv


cdef int basis_init(Basis *b, Py_ssize_t ncols) except -1:
    cdef Py_ssize_t i
    b.ncols = ncols
    b.words = (ncols + 63) >> 6
    if b.words < 1:
        b.words = 1
    b.rank = 0
    b.cap = 16
    b.rows = <uint64_t *> malloc(b.cap * b.words * sizeof(uint64_t))
    b.piv = <int64_t *> malloc(b.words * 64 * sizeof(int64_t))
    if b.rows == NULL or b.piv == NULL:
        raise MemoryError()
    for i in range(b.words * 64):
        b.piv[i] = -1
    return 0


cdef void basis_free(Basis *b):
    free(b.rows)
    free(b.piv)


cdef int basis_add(Basis *b, uint64_t *row, int64_t *ops) except -1:
    """Reduce ``row`` in place; returns 1 if it became a new basis row."""
    cdef Py_ssize_t w, i, h
    cdef int64_t k
    cdef uint64_t *src
    w = b.words - 1
    while True:
        while w >= 0 and row[w] == 0:
            w -= 1
        if w < 0:
            return 0
        h = w * 64 + 63 - __builtin_clzll(row[w])
        k = b.piv[h]
        if k < 0:
            if b.rank == b.cap:
                b.cap *= 2
                src = <uint64_t *> realloc(b.rows, b.cap * b.words * sizeof(uint64_t))
                if src == NULL:
                    raise MemoryError()
                b.rows = src
            memcpy(b.rows + b.rank * b.words, row, b.words * sizeof(uint64_t))
            b.piv[h] = b.rank
            b.rank += 1
            return 1
        src = b.rows + k * b.words
        for i in range(w + 1):
            row[i] ^= src[i]
        ops[0] += b.words


def row_basis(rows, Py_ssize_t ncols):
    cdef Basis b
    cdef int64_t ops = 0
    cdef uint64_t *row
    cdef Py_ssize_t idx
    cdef bytes raw
    basis_init(&b, ncols)
    row = <uint64_t *> malloc(b.words * sizeof(uint64_t))
    kept = []
    try:
        for idx, r in enumerate(rows):
            raw = (<object> r).to_bytes(b.words * 8, "little")
            memcpy(row, <char *> raw, b.words * 8)
            if basis_add(&b, row, &ops):
                kept.append(idx)
    finally:
        free(row)
        basis_free(&b)
    return kept, ops


cdef void shift_or(uint64_t *row, Py_ssize_t words, Py_ssize_t s) nogil:
    cdef Py_ssize_t q = s >> 6, r = s & 63, i
    cdef uint64_t v
    i = words - 1
    while i >= q:
        v = row[i - q] << r
        if r and i - q - 1 >= 0:
            v |= row[i - q - 1] >> (64 - r)
        row[i] |= v
        i -= 1


def cut_basis(partitions, int t):
    cdef Basis b
    cdef int64_t ops = 0
    cdef uint64_t *row
    cdef unsigned int masks[32]
    cdef Py_ssize_t idx, nb, i, base
    cdef int blk
    basis_init(&b, (<Py_ssize_t> 1) << (t - 1))
    row = <uint64_t *> malloc(b.words * sizeof(uint64_t))
    kept = []
    try:
        for idx, p in enumerate(partitions):
            memset(masks, 0, sizeof(masks))
            nb = 0
            i = 0
            for x in p:
                blk = x
                masks[blk] |= 1u << i
                if blk + 1 > nb:
                    nb = blk + 1
                i += 1
            memset(row, 0, b.words * sizeof(uint64_t))
            base = masks[0] >> 1
            row[base >> 6] = (<uint64_t> 1) << (base & 63)
            for i in range(1, nb):
                shift_or(row, b.words, masks[i] >> 1)
            if basis_add(&b, row, &ops):
                kept.append(idx)
    finally:
        free(row)
        basis_free(&b)
    return kept, ops
