"""Multilinear cochains on matrix algebras, standard polynomials and their products.

A cochain of arity m is stored as a formal combination of associative words: a
dict ``{word: coeff}`` where ``word`` is a permutation of the slots 0..m-1 and
the word (s1, ..., sm) evaluates to a_s1 a_s2 ... a_sm. Words are closed under
both products below, so every cochain built here stays in this form.

The shuffle and cup sums take an ``signed`` flag. With ``signed=True`` each
shuffle term is weighted by the sign of its shuffle permutation; with
``signed=False`` the terms are summed as they stand.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .scalar import QQ


# -- matrices -----------------------------------------------------------------------


class MatrixAlgebra:
    """Mat_n over a field; elements are n x n tuples of tuples."""

    def __init__(self, n: int, field=QQ):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.field = field
        # plain ints are exact rationals and much cheaper than Fraction
        self._lift = int if field == QQ else field

    def __repr__(self):
        return f"Mat({self.n}, {self.field})"

    def __eq__(self, other):
        return isinstance(other, MatrixAlgebra) and (self.n, self.field) == (other.n, other.field)

    def __hash__(self):
        return hash((self.n, self.field))

    def zero(self):
        z = self._lift(0)
        return tuple(tuple(z for _ in range(self.n)) for _ in range(self.n))

    def identity(self):
        return tuple(
            tuple(self._lift(1 if r == c else 0) for c in range(self.n)) for r in range(self.n)
        )

    def unit(self, i: int, j: int):
        """E_ij, 0-based."""
        return tuple(
            tuple(self._lift(1 if (r, c) == (i, j) else 0) for c in range(self.n)) for r in range(self.n)
        )

    def units(self) -> list:
        return [(i, j) for i in range(self.n) for j in range(self.n)]

    def mul(self, a, b):
        cols = list(zip(*b))
        return tuple(tuple(sum([x * y for x, y in zip(row, col)]) for col in cols) for row in a)

    def add(self, a, b):
        return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))

    def scale(self, a, c):
        return tuple(tuple(x * c for x in row) for row in a)

    def is_zero(self, a) -> bool:
        return not any(x for row in a for x in row)

    def random(self, rng: random.Random, bound: int = 3):
        return tuple(
            tuple(self._lift(rng.randint(-bound, bound)) for _ in range(self.n)) for _ in range(self.n)
        )


# -- cochains -----------------------------------------------------------------------


class Cochain:
    """A multilinear map A^m -> A written as a combination of associative words."""

    __slots__ = ("arity", "words")

    def __init__(self, arity: int, words: dict):
        if arity < 1:
            raise ValueError("arity must be at least 1")
        clean = {}
        for w, c in words.items():
            w = tuple(w)
            if sorted(w) != list(range(arity)):
                raise ValueError(f"word {w} is not a permutation of the {arity} slots")
            if c:
                s = clean.get(w, 0) + c
                if s:
                    clean[w] = s
                else:
                    clean.pop(w, None)
        self.arity = arity
        self.words = clean

    def __add__(self, other):
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        out = dict(self.words)
        for w, c in other.words.items():
            out[w] = out.get(w, 0) + c
        return Cochain(self.arity, out)

    def __neg__(self):
        return Cochain(self.arity, {w: -c for w, c in self.words.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return Cochain(self.arity, {w: c * scalar for w, c in self.words.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / Fraction(scalar))

    def __eq__(self, other):
        """Structural equality in the free associative algebra."""
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.arity == other.arity and self.words == other.words

    def __hash__(self):
        return hash((self.arity, frozenset(self.words.items())))

    def __bool__(self):
        return bool(self.words)

    def __repr__(self):
        return f"Cochain(arity={self.arity}, words={len(self.words)})"

    def __call__(self, algebra: MatrixAlgebra, *args):
        return evaluate(self, algebra, args)


def _sign(seq) -> int:
    s = 1
    seq = list(seq)
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                s = -s
    return s


def delta(k: int) -> Cochain:
    """Delta_k: the standard polynomial of arity k+1."""
    if k < 0:
        raise ValueError("k must be non-negative")
    words = {}
    for perm in itertools.permutations(range(k + 1)):
        words[perm] = _sign(perm)
    return Cochain(k + 1, words)


def _splits(total: int, first: int):
    """(block, rest, sign) over all shuffles of ``first`` slots against the rest."""
    for block in itertools.combinations(range(total), first):
        rest = tuple(s for s in range(total) if s not in block)
        yield block, rest, _sign(block + rest)


def shuffle(psi: Cochain, phi: Cochain, signed: bool = True) -> Cochain:
    """(psi o phi)(a...) = sum over shuffles of psi(phi(first block), remaining arguments).

    The inner cochain phi takes the first ``phi.arity`` shuffled arguments; psi
    gets that value in its first slot.
    """
    total = psi.arity + phi.arity - 1
    out = {}
    for block, rest, sgn in _splits(total, phi.arity):
        s = sgn if signed else 1
        for wp, cp in phi.words.items():
            inner = tuple(block[x] for x in wp)
            for ws, cs in psi.words.items():
                word = []
                for slot in ws:
                    word.extend(inner if slot == 0 else (rest[slot - 1],))
                word = tuple(word)
                out[word] = out.get(word, 0) + s * cs * cp
    return Cochain(total, out)


def cup(psi: Cochain, phi: Cochain, signed: bool = True) -> Cochain:
    """(psi u phi)(a...) = sum over shuffles of psi(first block) * phi(second block)."""
    total = psi.arity + phi.arity
    out = {}
    for block, rest, sgn in _splits(total, psi.arity):
        s = sgn if signed else 1
        for ws, cs in psi.words.items():
            left = tuple(block[x] for x in ws)
            for wp, cp in phi.words.items():
                word = left + tuple(rest[x] for x in wp)
                out[word] = out.get(word, 0) + s * cs * cp
    return Cochain(total, out)


# -- evaluation -------------------------------------------------------------------------


def evaluate(c: Cochain, algebra: MatrixAlgebra, args):
    """Exact value on a tuple of matrices; suffix products are shared between words."""
    if len(args) != c.arity:
        raise ValueError(f"cochain of arity {c.arity} given {len(args)} arguments")
    memo = {}

    def suffix(word):
        v = memo.get(word)
        if v is None:
            v = args[word[0]] if len(word) == 1 else algebra.mul(args[word[0]], suffix(word[1:]))
            memo[word] = v
        return v

    out = algebra.zero()
    for w, coeff in c.words.items():
        out = algebra.add(out, algebra.scale(suffix(w), coeff))
    return out


def unit_values(c: Cochain, n: int) -> dict:
    """Values of ``c`` on every tuple of matrix units of Mat_n.

    Returns ``{(unit tuple, (row, col)): coeff}`` with zero entries omitted. A word is
    nonzero on units only along a chain E_v0v1 E_v1v2 ..., so the sweep runs over
    words and vertex sequences instead of all n^(2m) unit tuples.
    """
    m = c.arity
    out = {}
    for w, coeff in c.words.items():
        for path in itertools.product(range(n), repeat=m + 1):
            units = [None] * m
            for t, slot in enumerate(w):
                units[slot] = (path[t], path[t + 1])
            key = (tuple(units), (path[0], path[-1]))
            s = out.get(key, 0) + coeff
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def unit_values_bruteforce(c: Cochain, algebra: MatrixAlgebra) -> dict:
    """Same map as :func:`unit_values` by evaluating every unit tuple."""
    units = algebra.units()
    out = {}
    for tup in itertools.product(units, repeat=c.arity):
        v = evaluate(c, algebra, [algebra.unit(*u) for u in tup])
        for r in range(algebra.n):
            for col in range(algebra.n):
                if v[r][col]:
                    out[(tup, (r, col))] = v[r][col]
    return out


@dataclass
class Comparison:
    equal: bool
    reason: str = ""
    witness: tuple = None
    difference: object = None
    checked: int = 0

    def payload(self) -> dict:
        out = {"equal": self.equal, "checked": self.checked}
        if not self.equal:
            out["reason"] = self.reason
            if self.witness is not None:
                out["witness"] = [list(map(list, u)) if isinstance(u, tuple) and isinstance(u[0], tuple)
                                  else list(u) for u in self.witness]
        return out


def _reduce(values: dict, algebra: MatrixAlgebra) -> dict:
    if algebra.field == QQ:
        return values
    out = {}
    for k, v in values.items():
        v = algebra.field(v)
        if v:
            out[k] = v
    return out


def cochain_equal(psi: Cochain, phi: Cochain, algebra: MatrixAlgebra, samples: int = 30, seed: int = 0,
                  exhaustive: bool = False) -> Comparison:
    """Compare two cochains pointwise on ``algebra``.

    Arity mismatch is reported first. ``exhaustive`` compares on every tuple of
    matrix units (exact equality, by multilinearity); otherwise random tuples.
    """
    if psi.arity != phi.arity:
        return Comparison(False, f"arity mismatch: {psi.arity} vs {phi.arity}")
    diff = psi - phi
    if exhaustive:
        values = _reduce(unit_values(diff, algebra.n), algebra)
        checked = (algebra.n * algebra.n) ** diff.arity
        if values:
            (units, entry), v = min(values.items())
            return Comparison(False, f"entry {entry} differs by {v}", units, v, checked)
        return Comparison(True, checked=checked)
    rng = random.Random(seed)
    for _ in range(samples):
        args = [algebra.random(rng) for _ in range(diff.arity)]
        v = evaluate(diff, algebra, args)
        if not algebra.is_zero(v):
            return Comparison(False, "values differ", tuple(args), v, samples)
    return Comparison(True, checked=samples)


def vanishes(c: Cochain, algebra: MatrixAlgebra, samples: int = 30, seed: int = 0,
             exhaustive: bool = False) -> Comparison:
    return cochain_equal(c, Cochain(c.arity, {}), algebra, samples, seed, exhaustive)


def unit_witness(c: Cochain, n: int):
    """A tuple of matrix units (0-based index pairs) where ``c`` is nonzero, or None."""
    values = unit_values(c, n)
    if not values:
        return None
    (units, entry), v = min(values.items())
    return units, entry, v


# -- relations -----------------------------------------------------------------------------


@dataclass
class RelationCheck:
    name: str
    indices: tuple
    arity: int
    structural: bool
    on_units: Comparison

    @property
    def holds(self) -> bool:
        return self.on_units.equal

    def payload(self) -> dict:
        out = {
            "relation": self.name,
            "indices": list(self.indices),
            "arity": self.arity,
            "holds": self.holds,
            "structural": self.structural,
        }
        if not self.holds:
            out["detail"] = self.on_units.reason
            if self.on_units.witness is not None:
                out["witness"] = [list(u) for u in self.on_units.witness]
        return out


def _check(name, indices, lhs, rhs, n):
    cmp = cochain_equal(lhs, rhs, MatrixAlgebra(n), exhaustive=True)
    return RelationCheck(name, indices, lhs.arity, lhs == rhs, cmp)


def delta_relations(max_arity: int = 5, n: int = 2, signed: bool = True) -> list:
    """The three shuffle relations among the Delta_k, every index choice up to ``max_arity``."""
    out = []
    for i in range(max_arity):
        for k in range(max_arity):
            if 2 * k + i + 1 <= max_arity:
                out.append(_check("shuffle-even", (i, 2 * k),
                                  shuffle(delta(i), delta(2 * k), signed), delta(2 * k + i) * (i + 1), n))
            if 2 * i + 2 * k + 3 <= max_arity:
                lhs = shuffle(delta(2 * i + 1), delta(2 * k + 1), signed)
                out.append(_check("shuffle-odd-odd", (2 * i + 1, 2 * k + 1), lhs, Cochain(lhs.arity, {}), n))
            if 2 * i + 2 * k + 2 <= max_arity:
                out.append(_check("shuffle-even-odd", (2 * i, 2 * k + 1),
                                  shuffle(delta(2 * i), delta(2 * k + 1), signed), delta(2 * i + 2 * k + 1), n))
    return out


def cup_relations(max_arity: int = 5, n: int = 2, signed: bool = True) -> list:
    """Delta_i u Delta_j = Delta_{i+j+1}, commutativity and associativity, arity <= ``max_arity``."""
    out = []
    for i in range(max_arity):
        for j in range(max_arity):
            if i + j + 2 <= max_arity:
                out.append(_check("cup", (i, j), cup(delta(i), delta(j), signed), delta(i + j + 1), n))
                out.append(_check("cup-commutative", (i, j),
                                  cup(delta(i), delta(j), signed), cup(delta(j), delta(i), signed), n))
            for k in range(max_arity):
                if i + j + k + 3 <= max_arity:
                    lhs = cup(cup(delta(i), delta(j), signed), delta(k), signed)
                    rhs = cup(delta(i), cup(delta(j), delta(k), signed), signed)
                    out.append(_check("cup-associative", (i, j, k), lhs, rhs, n))
    return out


def mixed_relations(max_arity: int = 5, n: int = 2, signed: bool = True) -> list:
    """(D_i u D_j) o D_k = (-1)^(k(j-1)) (D_i o D_k) u D_j + D_i u (D_j o D_k)."""
    out = []
    for i in range(max_arity):
        for j in range(max_arity):
            for k in range(max_arity):
                if i + j + k + 2 > max_arity:
                    continue
                di, dj, dk = delta(i), delta(j), delta(k)
                lhs = shuffle(cup(di, dj, signed), dk, signed)
                sgn = -1 if (k * (j - 1)) % 2 else 1
                rhs = cup(shuffle(di, dk, signed), dj, signed) * sgn + cup(di, shuffle(dj, dk, signed), signed)
                out.append(_check("mixed", (i, j, k), lhs, rhs, n))
    return out


def model_relations(n: int = 2, bound: int = 1, signed: bool = True) -> list:
    """Images e_i -> D_2i / 2, x^(j+1) -> D_(2j+1) satisfy the model algebra's products."""
    half = Fraction(1, 2)

    def e(i):
        return delta(2 * i) * half

    def x(j):
        return delta(2 * j + 1)

    out = []
    for i in range(bound + 1):
        for j in range(bound + 1):
            out.append(_check("model-e-e", (i, j), shuffle(e(i), e(j), signed), e(i + j) * (i + half), n))
            out.append(_check("model-e-x", (i, j), shuffle(e(i), x(j), signed), x(i + j) * half, n))
            lhs = shuffle(x(i), x(j), signed)
            out.append(_check("model-x-x", (i, j), lhs, Cochain(lhs.arity, {}), n))
    return out


# -- Amitsur-Levitzki --------------------------------------------------------------------------


def amitsur_levitzki(n: int, exhaustive: bool = True, samples: int = 100, seed: int = 0) -> dict:
    """Delta_(2n-1) vanishes on Mat_n; Delta_(2n-2) does not (witness on units)."""
    alg = MatrixAlgebra(n)
    top = vanishes(delta(2 * n - 1), alg, samples, seed, exhaustive)
    witness = unit_witness(delta(2 * n - 2), n)
    return {"vanishes": top, "below": witness}
