"""Kernel dispatch: the compiled extension when it imports, pure Python otherwise.

Both backends share an int64 contract. :func:`fits` decides whether a batch is
provably overflow-free; callers that get ``False`` use the exact generic path in
:mod:`rsymwitt.witt` instead.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _native
except ImportError:  # extension not built
    _native = None

_BACKENDS = {"python": _kernels_py}
if _native is not None:
    _BACKENDS["cython"] = _native

_active = "cython" if _native is not None else "python"

_INT64_SAFE = 2**62


def available_backends() -> list:
    return sorted(_BACKENDS)


def backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}")
    _active = name


class Encoding:
    """Kernel-level description of a Witt algebra's coefficient rules."""

    def __init__(self, domain):
        self.n = domain.n
        if domain.kind == "divpow":
            self.p = domain.p
            self.bounds = np.asarray(domain.bounds, dtype=np.int64)
            self.btab = np.array(
                [[math.comb(a, b) % domain.p for b in range(domain.p)] for a in range(domain.p)],
                dtype=np.int64,
            )
        else:
            self.p = 0
            self.bounds = np.zeros(domain.n, dtype=np.int64)
            self.btab = np.zeros((1, 1), dtype=np.int64)


def encode_elements(basis_elements, n: int):
    """``[(alpha, i), ...]`` (1-based directions) to ``(elem_exp, elem_dir)`` arrays."""
    exp = np.zeros((len(basis_elements), n), dtype=np.int64)
    dirs = np.zeros(len(basis_elements), dtype=np.int64)
    for r, (alpha, i) in enumerate(basis_elements):
        exp[r] = alpha
        dirs[r] = i - 1
    return exp, dirs


def fits(enc: Encoding, elem_exp, word_len: int, right: bool = False, terms: int = 1) -> bool:
    """True when every coefficient (and a sum of ``terms`` of them) fits in int64."""
    if enc.p:
        return enc.p < 2**31
    if elem_exp.size == 0:
        return True
    m = int(np.abs(elem_exp).max()) + 1
    if right:
        m *= word_len + 1
    bound = m ** max(word_len - 1, 0) * max(terms, 1)
    return bound < _INT64_SAFE


def _words_array(words):
    return np.asarray([list(w) for w in words], dtype=np.int64).reshape(len(words), -1)


def eval_left(enc: Encoding, words, elem_exp, elem_dir, tuples):
    """Evaluate 0-based slot words (right-nested) on index tuples; see the backend docs."""
    mod = _BACKENDS[_active]
    return mod.eval_left(
        _words_array(words), elem_exp, elem_dir, np.asarray(tuples, dtype=np.int64),
        enc.p, enc.bounds, enc.btab,
    )


def eval_right(enc: Encoding, words, elem_exp, elem_dir, tuples):
    mod = _BACKENDS[_active]
    return mod.eval_right(
        _words_array(words), elem_exp, elem_dir, np.asarray(tuples, dtype=np.int64),
        enc.p, enc.bounds, enc.btab,
    )


def left_rows(enc: Encoding, words, elem_exp, elem_dir, tuples):
    mod = _BACKENDS[_active]
    args = (
        _words_array(words), elem_exp, elem_dir, np.asarray(tuples, dtype=np.int64),
        enc.p, enc.bounds, enc.btab,
    )
    try:
        return mod.left_rows(*args)
    except OverflowError:
        return _kernels_py.left_rows(*args)
