"""Pure-Python kernels: word evaluation on tuples of Witt basis vector fields.

Reference implementation for :mod:`rsymwitt._kernels`; same signatures, same
outputs. Basis elements x^a d_i are encoded as an exponent row ``elem_exp[e]``
and a 0-based direction ``elem_dir[e]``. ``p == 0`` selects the characteristic-0
rule d_j(x^a) = a_j x^(a - e_j); ``p > 0`` selects truncated divided powers with
exclusive exponent ``bounds`` and the Pascal table ``btab`` (C(a, b) mod p for a, b < p).
"""

import math

import numpy as np


def _binom_mod(top, bottom, p, btab):
    r = 1
    for t, b in zip(top, bottom):
        while t or b:
            td, bd = t % p, b % p
            if bd > td:
                return 0
            r = r * int(btab[td, bd]) % p
            t //= p
            b //= p
        if r == 0:
            return 0
    return r


def _left_fold(word, tup, elem_exp, elem_dir, p, bounds, btab, n):
    last = tup[word[-1]]
    cur = list(elem_exp[last])
    d = int(elem_dir[last])
    coef = 1
    for pos in range(len(word) - 2, -1, -1):
        e = tup[word[pos]]
        beta = elem_exp[e]
        if p == 0:
            c = int(beta[d])
            if c == 0:
                return 0, cur, d
            coef *= c
            cur = [int(beta[t]) + cur[t] - (1 if t == d else 0) for t in range(n)]
        else:
            if beta[d] == 0:
                return 0, cur, d
            new = [int(beta[t]) + cur[t] - (1 if t == d else 0) for t in range(n)]
            if any(new[t] >= bounds[t] for t in range(n)):
                return 0, cur, d
            coef = coef * _binom_mod(new, cur, p, btab) % p
            if coef == 0:
                return 0, cur, d
            cur = new
        d = int(elem_dir[e])
    return coef, cur, d


def _right_fold(word, tup, elem_exp, elem_dir, p, bounds, btab, n):
    first = tup[word[0]]
    cur = list(elem_exp[first])
    d = int(elem_dir[first])
    coef = 1
    for pos in range(1, len(word)):
        e = tup[word[pos]]
        beta = elem_exp[e]
        j = int(elem_dir[e])
        if p == 0:
            c = cur[j]
            if c == 0:
                return 0, cur, d
            coef *= c
            cur = [cur[t] + int(beta[t]) - (1 if t == j else 0) for t in range(n)]
        else:
            if cur[j] == 0:
                return 0, cur, d
            new = [cur[t] + int(beta[t]) - (1 if t == j else 0) for t in range(n)]
            if any(new[t] >= bounds[t] for t in range(n)):
                return 0, cur, d
            coef = coef * _binom_mod(new, [int(b) for b in beta], p, btab) % p
            if coef == 0:
                return 0, cur, d
            cur = new
    return coef, cur, d


def _eval(fold, words, elem_exp, elem_dir, tuples, p, bounds, btab):
    T, W, n = len(tuples), len(words), elem_exp.shape[1]
    coef = np.zeros((T, W), dtype=np.int64)
    out_exp = np.zeros((T, W, n), dtype=np.int64)
    out_dir = np.zeros((T, W), dtype=np.int64)
    words_l = [list(map(int, w)) for w in words]
    for t in range(T):
        tup = [int(x) for x in tuples[t]]
        for w, word in enumerate(words_l):
            c, e, d = fold(word, tup, elem_exp, elem_dir, p, bounds, btab, n)
            if c:
                coef[t, w] = c
                out_exp[t, w] = e
                out_dir[t, w] = d
    return coef, out_exp, out_dir


def eval_left(words, elem_exp, elem_dir, tuples, p, bounds, btab):
    """Evaluate right-nested words a_{w1} o (a_{w2} o (... o a_{wk})) on every tuple."""
    return _eval(_left_fold, words, elem_exp, elem_dir, tuples, p, bounds, btab)


def eval_right(words, elem_exp, elem_dir, tuples, p, bounds, btab):
    """Evaluate left-nested words ((a_{w1} o a_{w2}) o ...) o a_{wk} on every tuple."""
    return _eval(_right_fold, words, elem_exp, elem_dir, tuples, p, bounds, btab)


def _normalize(cols, vals, p):
    if p == 0:
        g = 0
        for v in vals:
            g = math.gcd(g, abs(v))
        if vals[0] < 0:
            g = -g
        return cols, [v // g for v in vals]
    inv = pow(int(vals[0]), -1, p)
    return cols, [v * inv % p for v in vals]


def left_rows(words, elem_exp, elem_dir, tuples, p, bounds, btab):
    """Rows of the evaluation matrix, one per (tuple, output basis term).

    Returns CSR arrays ``(indptr, indices, data)``. Rows are normalized (primitive
    with positive leading entry in characteristic 0, monic mod p); zero rows are
    dropped.
    """
    coef, out_exp, out_dir = eval_left(words, elem_exp, elem_dir, tuples, p, bounds, btab)
    indptr = [0]
    indices = []
    data = []
    for t in range(len(tuples)):
        groups = {}
        for w in np.nonzero(coef[t])[0]:
            key = (int(out_dir[t, w]), tuple(int(x) for x in out_exp[t, w]))
            groups.setdefault(key, []).append((int(w), int(coef[t, w])))
        for key in sorted(groups):
            entries = sorted(groups[key])
            cols, vals = _normalize([c for c, _ in entries], [v for _, v in entries], p)
            indices.extend(cols)
            data.extend(vals)
            indptr.append(len(indices))
    return (
        np.asarray(indptr, dtype=np.int64),
        np.asarray(indices, dtype=np.int64),
        np.asarray(data, dtype=np.int64),
    )
