"""The space of multilinear left polynomial identities of a fixed degree.

Columns are the d! words t_s(1) o ... o t_s(d). Each basis tuple contributes one
row per output basis vector field; an identity is a vector in the kernel.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import kernels
from .freealg import (
    LeftPolynomial,
    check_identity,
    multilinear_monomials,
    random_tuples,
    tau_family,
)
from .linalg import Echelon
from .scalar import QQ
from .witt import WittAlgebra, circ


class IdentitySearchError(RuntimeError):
    pass


@dataclass
class EvaluationMatrix:
    algebra: WittAlgebra
    degree: int
    columns: list
    echelon: Echelon
    mode: str
    window_label: str
    window_size: int
    seed: int
    tuples: int = 0
    rows: int = 0
    distinct_rows: int = 0
    history: list = field(default_factory=list)
    used: set = field(default_factory=set)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    @property
    def rank(self) -> int:
        return self.echelon.rank

    @property
    def nullity(self) -> int:
        return self.ncols - self.rank

    def census(self) -> dict:
        return {
            "mode": self.mode,
            "window": self.window_label,
            "window_size": self.window_size,
            "seed": self.seed,
            "tuples": self.tuples,
            "rows": self.rows,
            "distinct_rows": self.distinct_rows,
            "nullity_history": [list(h) for h in self.history],
        }


@dataclass
class IdentitySpace:
    degree: int
    basis: list
    census: dict
    verified_on: int = 0

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _generic_rows(alg, words, tuples):
    """Rows by exact generic evaluation, for batches outside the kernel's int64 range."""
    out = []
    for t in tuples:
        assignment = [alg.basis(a, i) for a, i in t]
        memo = {}

        def suffix(word):
            v = memo.get(word)
            if v is None:
                v = assignment[word[0] - 1] if len(word) == 1 else circ(assignment[word[0] - 1], suffix(word[1:]))
                memo[word] = v
            return v

        groups = {}
        for col, w in enumerate(words):
            for key, c in suffix(w).terms.items():
                groups.setdefault(key, {})[col] = c
        for key in sorted(groups):
            out.append(groups[key])
    return out


def _add_batch(M: EvaluationMatrix, batch, seen: set, elem_index, elem_exp, elem_dir, enc):
    alg = M.algebra
    words0 = [tuple(v - 1 for v in w) for w in M.columns]
    if kernels.fits(enc, elem_exp, M.degree):
        idx = [[elem_index[k] for k in t] for t in batch]
        indptr, indices, data = kernels.left_rows(enc, words0, elem_exp, elem_dir, idx)
        rows = []
        for r in range(len(indptr) - 1):
            lo, hi = indptr[r], indptr[r + 1]
            key = indices[lo:hi].tobytes() + data[lo:hi].tobytes()
            M.rows += 1
            if key in seen:
                continue
            seen.add(key)
            rows.append(dict(zip(indices[lo:hi].tolist(), data[lo:hi].tolist())))
    else:
        rows = []
        for row in _generic_rows(alg, M.columns, batch):
            M.rows += 1
            key = tuple(sorted((c, str(v)) for c, v in row.items()))
            if key in seen:
                continue
            seen.add(key)
            rows.append(row)
    M.distinct_rows += len(rows)
    for row in rows:
        if M.echelon.rank == M.ncols:
            break
        M.echelon.add(row)
    M.tuples += len(batch)
    M.history.append((M.tuples, M.nullity))


def assemble(alg: WittAlgebra, d: int, mode: str = "random", samples: int = None, seed: int = 0,
             window=None, window_label: str = "default", include=(), batch_size: int = 2000,
             stop_at_full_rank: bool = True) -> EvaluationMatrix:
    """Build the evaluation matrix for degree ``d`` on basis tuples.

    ``mode`` is ``"random"`` (``samples`` tuples drawn from ``window``; defaults to
    3*d!) or ``"exhaustive"`` (every d-tuple over the window). ``include`` lists
    extra tuples placed first.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    if mode not in ("random", "exhaustive"):
        raise ValueError(f"unknown tuple source {mode!r}")
    window = list(window if window is not None else alg.default_window())
    if not window:
        raise ValueError("empty window")
    if mode == "exhaustive" and not alg.domain.finite and window_label == "default":
        window_label = "default-truncation"
    columns = multilinear_monomials(d)
    M = EvaluationMatrix(alg, d, columns, Echelon(alg.field), mode, window_label, len(window), seed)
    include = [tuple(t) for t in include]
    elems = sorted(set(window) | {k for t in include for k in t})
    elem_index = {k: e for e, k in enumerate(elems)}
    elem_exp, elem_dir = kernels.encode_elements(elems, alg.n)
    enc = kernels.Encoding(alg.domain)

    if mode == "random":
        rng = random.Random(seed)
        count = samples if samples is not None else 3 * len(columns)
        source = itertools.chain(include, random_tuples(rng, window, d, count))
    else:
        source = itertools.chain(include, itertools.product(window, repeat=d))

    seen: set = set()
    while True:
        batch = list(itertools.islice(source, batch_size))
        if not batch:
            break
        if mode == "random":
            M.used.update(batch)
        _add_batch(M, batch, seen, elem_index, elem_exp, elem_dir, enc)
        if stop_at_full_rank and M.rank == M.ncols:
            break
    if M.distinct_rows == 0:
        raise IdentitySearchError(
            f"window {window_label!r} produced no nonzero evaluation; every word vanishes on it"
        )
    return M


def _fresh_window(alg: WittAlgebra):
    if alg.domain.finite:
        return alg.all_basis()
    if alg.family == "laurent":
        return alg.basis_box(-3, 3)
    return alg.basis_box(0, 3)


def _primitive(vec: dict, field):
    """Scale a kernel vector to coprime integers (QQ) or leave monic (F_p)."""
    if field != QQ:
        return vec
    from math import gcd, lcm

    den = 1
    for v in vec.values():
        den = lcm(den, v.denominator)
    ints = {c: int(v * den) for c, v in vec.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    lead = min(ints)
    if ints[lead] < 0:
        g = -g
    return {c: v // g for c, v in ints.items()}


def nullspace(M: EvaluationMatrix, verify_samples: int = 100, verify_general: int = 3,
              seed: int = None) -> IdentitySpace:
    """Kernel of ``M`` as left polynomials, each re-verified on fresh tuples."""
    alg = M.algebra
    field = alg.field
    vecs = M.echelon.nullspace(M.ncols)
    basis = []
    for vec in vecs:
        vec = _primitive(vec, field)
        basis.append(LeftPolynomial({M.columns[c]: v for c, v in vec.items()}, M.degree, field))
    fresh_seed = (M.seed if seed is None else seed) + 7919
    rng = random.Random(fresh_seed)
    window = _fresh_window(alg)
    tuples = []
    if M.mode == "random":
        attempts = 0
        while len(tuples) < verify_samples and attempts < 50 * verify_samples:
            t = tuple(rng.choice(window) for _ in range(M.degree))
            attempts += 1
            if t not in M.used:
                tuples.append(t)
    for f in basis:
        v = check_identity(f, alg, tuples=tuples, seed=fresh_seed, window=window, general=verify_general)
        if not v.holds:
            raise IdentitySearchError(
                f"kernel vector {f} fails on fresh tuple {[str(a) for a in v.counterexample]}; "
                f"the assembly window {M.window_label!r} is too small"
            )
    return IdentitySpace(M.degree, basis, M.census(), len(tuples) + verify_general)


def _coordinates(f: LeftPolynomial, columns):
    index = {w: c for c, w in enumerate(columns)}
    row = {}
    for w, c in f.terms.items():
        if w not in index:
            raise ValueError(f"{w} is not a multilinear word of degree {len(columns[0])}")
        row[index[w]] = c
    return row


def span_membership(f: LeftPolynomial, S: IdentitySpace) -> bool:
    """Exact test that ``f`` lies in the span of ``S.basis``."""
    if not f:
        return True
    if f.degree != S.degree or not f.is_multilinear():
        return False
    columns = multilinear_monomials(S.degree)
    ech = Echelon(f.field)
    for g in S.basis:
        ech.add(_coordinates(g, columns))
    return ech.contains(_coordinates(f, columns))


def coefficient_rank(polys, d: int, field=QQ) -> int:
    columns = multilinear_monomials(d)
    ech = Echelon(field)
    for f in polys:
        ech.add(_coordinates(f, columns))
    return ech.rank


def tau_independence_rank(n: int, field=QQ) -> int:
    """Rank of the 2n+1 polynomials tau_l s_2n over the (2n+1)! words."""
    return coefficient_rank(tau_family(2 * n, field), 2 * n + 1, field)


def search(alg: WittAlgebra, d: int, mode: str = "random", samples: int = None, seed: int = 0,
           window=None, window_label: str = "default", include=(), verify_samples: int = 100) -> IdentitySpace:
    M = assemble(alg, d, mode, samples, seed, window, window_label, include)
    return nullspace(M, verify_samples=verify_samples)


def same_space(S: IdentitySpace, T: IdentitySpace) -> bool:
    """Equality of two identity spaces of the same degree."""
    if S.degree != T.degree or S.dimension != T.dimension:
        return False
    return all(span_membership(f, S) for f in T.basis)
