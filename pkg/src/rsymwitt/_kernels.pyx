# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: word evaluation on tuples of Witt basis vector fields.

Mirrors :mod:`rsymwitt._kernels_py` exactly (signatures, outputs, row order).
Coefficients are int64; the dispatcher in :mod:`rsymwitt.kernels` only routes
inputs here whose magnitudes are proven to fit.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport qsort, malloc, free

cnp.import_array()

ctypedef long long i64

cdef struct Entry:
    i64 key
    i64 col
    i64 val


cdef int _cmp_entry(const void* a, const void* b) noexcept nogil:
    cdef const Entry* x = <const Entry*> a
    cdef const Entry* y = <const Entry*> b
    if x.key < y.key:
        return -1
    if x.key > y.key:
        return 1
    if x.col < y.col:
        return -1
    if x.col > y.col:
        return 1
    return 0


cdef inline i64 _binom_mod(i64* top, i64* bottom, int n, i64 p, i64[:, ::1] btab) noexcept nogil:
    cdef i64 r = 1
    cdef i64 t, b, td, bd
    cdef int c
    for c in range(n):
        t = top[c]
        b = bottom[c]
        while t or b:
            td = t % p
            bd = b % p
            if bd > td:
                return 0
            r = r * btab[td, bd] % p
            t //= p
            b //= p
        if r == 0:
            return 0
    return r


cdef i64 _left_fold(i64[::1] word, i64[::1] tup, i64[:, ::1] elem_exp, i64[::1] elem_dir,
                    i64 p, i64[::1] bounds, i64[:, ::1] btab, int n,
                    i64* cur, i64* new, i64* out_dir) noexcept nogil:
    cdef int k = word.shape[0]
    cdef int pos, c
    cdef i64 e, d, coef, f
    e = tup[word[k - 1]]
    for c in range(n):
        cur[c] = elem_exp[e, c]
    d = elem_dir[e]
    coef = 1
    for pos in range(k - 2, -1, -1):
        e = tup[word[pos]]
        if p == 0:
            f = elem_exp[e, d]
            if f == 0:
                return 0
            coef *= f
            for c in range(n):
                cur[c] = elem_exp[e, c] + cur[c]
            cur[d] -= 1
        else:
            if elem_exp[e, d] == 0:
                return 0
            for c in range(n):
                new[c] = elem_exp[e, c] + cur[c]
            new[d] -= 1
            for c in range(n):
                if new[c] >= bounds[c]:
                    return 0
            coef = coef * _binom_mod(new, cur, n, p, btab) % p
            if coef == 0:
                return 0
            for c in range(n):
                cur[c] = new[c]
        d = elem_dir[e]
    out_dir[0] = d
    return coef


cdef i64 _right_fold(i64[::1] word, i64[::1] tup, i64[:, ::1] elem_exp, i64[::1] elem_dir,
                     i64 p, i64[::1] bounds, i64[:, ::1] btab, int n,
                     i64* cur, i64* new, i64* beta, i64* out_dir) noexcept nogil:
    cdef int k = word.shape[0]
    cdef int pos, c
    cdef i64 e, d, j, coef, f
    e = tup[word[0]]
    for c in range(n):
        cur[c] = elem_exp[e, c]
    d = elem_dir[e]
    coef = 1
    for pos in range(1, k):
        e = tup[word[pos]]
        j = elem_dir[e]
        if p == 0:
            f = cur[j]
            if f == 0:
                return 0
            coef *= f
            for c in range(n):
                cur[c] = cur[c] + elem_exp[e, c]
            cur[j] -= 1
        else:
            if cur[j] == 0:
                return 0
            for c in range(n):
                new[c] = cur[c] + elem_exp[e, c]
                beta[c] = elem_exp[e, c]
            new[j] -= 1
            for c in range(n):
                if new[c] >= bounds[c]:
                    return 0
            coef = coef * _binom_mod(new, beta, n, p, btab) % p
            if coef == 0:
                return 0
            for c in range(n):
                cur[c] = new[c]
    out_dir[0] = d
    return coef


def _eval(bint left, words_in, elem_exp_in, elem_dir_in, tuples_in, i64 p, bounds_in, btab_in):
    cdef i64[:, ::1] words = np.ascontiguousarray(words_in, dtype=np.int64)
    cdef i64[:, ::1] elem_exp = np.ascontiguousarray(elem_exp_in, dtype=np.int64)
    cdef i64[::1] elem_dir = np.ascontiguousarray(elem_dir_in, dtype=np.int64)
    cdef i64[:, ::1] tuples = np.ascontiguousarray(tuples_in, dtype=np.int64)
    cdef i64[::1] bounds = np.ascontiguousarray(bounds_in, dtype=np.int64)
    cdef i64[:, ::1] btab = np.ascontiguousarray(btab_in, dtype=np.int64)
    cdef int T = tuples.shape[0]
    cdef int W = words.shape[0]
    cdef int n = elem_exp.shape[1]
    coef_a = np.zeros((T, W), dtype=np.int64)
    exp_a = np.zeros((T, W, n), dtype=np.int64)
    dir_a = np.zeros((T, W), dtype=np.int64)
    cdef i64[:, ::1] coef = coef_a
    cdef i64[:, :, ::1] out_exp = exp_a
    cdef i64[:, ::1] out_dir = dir_a
    cdef i64* cur = <i64*> malloc(3 * n * sizeof(i64) + sizeof(i64))
    cdef i64* new = cur + n
    cdef i64* beta = cur + 2 * n
    cdef i64 d = 0
    cdef i64 c
    cdef int t, w, q
    try:
        with nogil:
            for t in range(T):
                for w in range(W):
                    if left:
                        c = _left_fold(words[w], tuples[t], elem_exp, elem_dir, p, bounds, btab,
                                       n, cur, new, &d)
                    else:
                        c = _right_fold(words[w], tuples[t], elem_exp, elem_dir, p, bounds, btab,
                                        n, cur, new, beta, &d)
                    if c != 0:
                        coef[t, w] = c
                        out_dir[t, w] = d
                        for q in range(n):
                            out_exp[t, w, q] = cur[q]
    finally:
        free(cur)
    return coef_a, exp_a, dir_a


def eval_left(words, elem_exp, elem_dir, tuples, p, bounds, btab):
    """Evaluate right-nested words a_{w1} o (a_{w2} o (... o a_{wk})) on every tuple."""
    return _eval(True, words, elem_exp, elem_dir, tuples, p, bounds, btab)


def eval_right(words, elem_exp, elem_dir, tuples, p, bounds, btab):
    """Evaluate left-nested words ((a_{w1} o a_{w2}) o ...) o a_{wk} on every tuple."""
    return _eval(False, words, elem_exp, elem_dir, tuples, p, bounds, btab)


cdef inline i64 _gcd(i64 a, i64 b) noexcept nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef inline i64 _inv_mod(i64 a, i64 p) noexcept nogil:
    # p prime, a != 0 mod p
    cdef i64 r = 1
    cdef i64 base = a % p
    cdef i64 e = p - 2
    while e > 0:
        if e & 1:
            r = r * base % p
        base = base * base % p
        e >>= 1
    return r


def left_rows(words_in, elem_exp_in, elem_dir_in, tuples_in, i64 p, bounds_in, btab_in):
    """Rows of the evaluation matrix, one per (tuple, output basis term); CSR output.

    Row order and normalization are identical to the pure-Python kernel.
    """
    cdef i64[:, ::1] words = np.ascontiguousarray(words_in, dtype=np.int64)
    cdef i64[:, ::1] elem_exp = np.ascontiguousarray(elem_exp_in, dtype=np.int64)
    cdef i64[::1] elem_dir = np.ascontiguousarray(elem_dir_in, dtype=np.int64)
    cdef i64[:, ::1] tuples = np.ascontiguousarray(tuples_in, dtype=np.int64)
    cdef i64[::1] bounds = np.ascontiguousarray(bounds_in, dtype=np.int64)
    cdef i64[:, ::1] btab = np.ascontiguousarray(btab_in, dtype=np.int64)
    cdef int T = tuples.shape[0]
    cdef int W = words.shape[0]
    cdef int n = elem_exp.shape[1]
    cdef int k = words.shape[1] if W > 0 else 1
    cdef i64 R, B, lim
    cdef int c
    if p == 0:
        R = (int(np.abs(elem_exp_in).max()) + 1) * k if elem_exp.shape[0] else k
        B = 2 * R + 1
    else:
        R = 0
        B = int(max(bounds_in)) + 1
    if (n + 1) * int(B) ** n >= 2**62:
        raise OverflowError("row key does not fit in int64")

    cdef Entry* buf = <Entry*> malloc((W + 1) * sizeof(Entry))
    cdef i64* cur = <i64*> malloc(3 * n * sizeof(i64) + sizeof(i64))
    cdef i64* new = cur + n
    cdef i64* beta = cur + 2 * n
    cdef i64 d = 0
    cdef i64 val, key, g, inv
    cdef int t, w, m, start, stop, q
    indptr = [0]
    ind_chunks = []
    dat_chunks = []
    rows_i = np.empty(W, dtype=np.int64)
    rows_v = np.empty(W, dtype=np.int64)
    cdef i64[::1] ri = rows_i
    cdef i64[::1] rv = rows_v
    cdef int total = 0
    try:
        for t in range(T):
            m = 0
            with nogil:
                for w in range(W):
                    val = _left_fold(words[w], tuples[t], elem_exp, elem_dir, p, bounds, btab,
                                     n, cur, new, &d)
                    if val != 0:
                        key = d
                        for q in range(n):
                            key = key * B + (cur[q] + R)
                        buf[m].key = key
                        buf[m].col = w
                        buf[m].val = val
                        m += 1
                if m > 1:
                    qsort(buf, m, sizeof(Entry), _cmp_entry)
            start = 0
            while start < m:
                stop = start
                while stop < m and buf[stop].key == buf[start].key:
                    stop += 1
                if p == 0:
                    g = 0
                    for q in range(start, stop):
                        g = _gcd(g, buf[q].val)
                    if buf[start].val < 0:
                        g = -g
                    for q in range(start, stop):
                        ri[q - start] = buf[q].col
                        rv[q - start] = buf[q].val // g
                else:
                    inv = _inv_mod(buf[start].val, p)
                    for q in range(start, stop):
                        ri[q - start] = buf[q].col
                        rv[q - start] = buf[q].val * inv % p
                ind_chunks.append(rows_i[: stop - start].copy())
                dat_chunks.append(rows_v[: stop - start].copy())
                total += stop - start
                indptr.append(total)
                start = stop
    finally:
        free(buf)
        free(cur)
    if ind_chunks:
        indices = np.concatenate(ind_chunks)
        data = np.concatenate(dat_chunks)
    else:
        indices = np.zeros(0, dtype=np.int64)
        data = np.zeros(0, dtype=np.int64)
    return np.asarray(indptr, dtype=np.int64), indices, data
