"""Free left polynomials and their evaluation on Witt algebras.

A left monomial is a tuple of 1-based variable indices ``(i1, ..., ik)`` standing
for t_i1 o (t_i2 o (... o t_ik)); its degree is its length. A right monomial
``(i1, ..., ik)`` stands for ((t_i1 o t_i2) o ...) o t_ik.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from . import exponent as ex
from .scalar import QQ, PrimeField
from .witt import WittAlgebra, WittElement, _acc, circ, fn_deriv, fn_mul


# -- permutations -------------------------------------------------------------


def signed_permutations(k: int):
    """Yield ``(perm, sign)`` for Sym_k in lexicographic order (0-based images).

    The sign is accumulated incrementally: picking the r-th smallest remaining
    value contributes (-1)**r.
    """
    remaining = list(range(k))
    perm = []

    def rec(sign):
        if not remaining:
            yield tuple(perm), sign
            return
        for r in range(len(remaining)):
            v = remaining.pop(r)
            perm.append(v)
            yield from rec(-sign if r % 2 else sign)
            perm.pop()
            remaining.insert(r, v)

    yield from rec(1)


def perm_sign(perm) -> int:
    """Sign of a permutation given by its images (any labels), via cycle count."""
    index = {v: t for t, v in enumerate(sorted(perm))}
    images = [index[v] for v in perm]
    seen = [False] * len(images)
    s = 1
    for start in range(len(images)):
        if seen[start]:
            continue
        j, length = start, 0
        while not seen[j]:
            seen[j] = True
            j = images[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


# -- left polynomials -------------------------------------------------------------


class LeftPolynomial:
    """A finite sum of left monomials with nonzero field coefficients."""

    __slots__ = ("terms", "nvars", "field")

    def __init__(self, terms: dict, nvars: int, field=QQ):
        clean = {}
        for word, c in terms.items():
            word = tuple(word)
            if not word:
                raise ValueError("left monomials are nonempty")
            if any(not 1 <= v <= nvars for v in word):
                raise ValueError(f"variable index out of range in {word}")
            c = field(c)
            if c:
                clean[word] = clean.get(word, field(0)) + c
                if not clean[word]:
                    del clean[word]
        self.terms = clean
        self.nvars = nvars
        self.field = field

    @classmethod
    def monomial(cls, word, nvars=None, field=QQ, coeff=1):
        word = tuple(word)
        return cls({word: coeff}, nvars or max(word), field)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def is_multilinear(self) -> bool:
        return all(len(set(w)) == len(w) for w in self.terms)

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def _combine(self, other, sign):
        if self.field != other.field:
            raise ValueError("field mismatch")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, self.field(0)) + sign * c
        return LeftPolynomial(out, max(self.nvars, other.nvars), self.field)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return LeftPolynomial({w: -c for w, c in self.terms.items()}, self.nvars, self.field)

    def __mul__(self, scalar):
        return LeftPolynomial({w: c * scalar for w, c in self.terms.items()}, self.nvars, self.field)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LeftPolynomial):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"LeftPolynomial({format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)


def standard_rsym(k: int, field=QQ) -> LeftPolynomial:
    """sum_{s in Sym_k} sign(s) t_s(1) o ... o t_s(k) o t_{k+1}."""
    if k < 1:
        raise ValueError("k must be positive")
    terms = {}
    for perm, sign in signed_permutations(k):
        terms[tuple(v + 1 for v in perm) + (k + 1,)] = sign
    return LeftPolynomial(terms, k + 1, field)


def permute_polynomial(f: LeftPolynomial, sigma) -> LeftPolynomial:
    """g(t_1, ..., t_s) = f(t_sigma(1), ..., t_sigma(s)).

    ``sigma`` is a tuple of 1-based images: ``sigma[v - 1]`` replaces ``t_v``.
    """
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise ValueError(f"{sigma} is not a permutation")
    if len(sigma) < f.nvars:
        sigma = sigma + tuple(range(len(sigma) + 1, f.nvars + 1))
    return LeftPolynomial(
        {tuple(sigma[v - 1] for v in w): c for w, c in f.terms.items()}, max(f.nvars, len(sigma)), f.field
    )


def tau(l: int, k: int) -> tuple:
    """The cyclic relabeling tau_l on the k+1 variables of s_k^rsym.

    Labels 0..k with 0 naming the final variable t_{k+1}; tau_l sends 0 -> l and
    j -> j - 1 for 1 <= j <= l, fixing the rest. Returned as 1-based images.
    """
    if not 0 <= l <= k:
        raise ValueError(f"l must be in 0..{k}")

    def label_to_var(x):
        return k + 1 if x == 0 else x

    images = [0] * (k + 1)
    for x in range(k + 1):
        if x == 0:
            y = l
        elif x <= l:
            y = x - 1
        else:
            y = x
        images[label_to_var(x) - 1] = label_to_var(y)
    return tuple(images)


def tau_family(k: int, field=QQ) -> list:
    s = standard_rsym(k, field)
    return [permute_polynomial(s, tau(l, k)) for l in range(k + 1)]


def multilinear_monomials(d: int) -> list:
    """All d! right-nested words in t_1..t_d, lexicographic."""
    return [tuple(v + 1 for v in perm) for perm, _ in signed_permutations(d)]


# -- evaluation -------------------------------------------------------------------


def _as_basis(a: WittElement):
    if len(a.terms) != 1:
        return None
    (key, c), = a.terms.items()
    return key, c


def eval_left(f, assignment) -> WittElement:
    """Substitute ``t_v := assignment[v - 1]`` into a left monomial/polynomial."""
    if isinstance(f, tuple):
        f = LeftPolynomial.monomial(f, field=assignment[0].algebra.field)
    if len(assignment) < f.nvars:
        raise ValueError(f"need {f.nvars} elements, got {len(assignment)}")
    alg = assignment[0].algebra
    for a in assignment:
        if a.algebra != alg:
            raise ValueError("assignment mixes algebras")
    memo = {}

    def suffix(word):
        v = memo.get(word)
        if v is None:
            if len(word) == 1:
                v = assignment[word[0] - 1]
            else:
                v = circ(assignment[word[0] - 1], suffix(word[1:]))
            memo[word] = v
        return v

    out = alg.zero
    for word, c in f.terms.items():
        v = suffix(word)
        if v:
            out = out + v * c
    return out


def eval_right(word, assignment) -> WittElement:
    """((a_i1 o a_i2) o ...) o a_ik."""
    word = tuple(word)
    cur = assignment[word[0] - 1]
    for v in word[1:]:
        cur = circ(cur, assignment[v - 1])
    return cur


def _batch(alg: WittAlgebra, words_coeffs, tuples_keys, right=False):
    """Evaluate ``sum c * word`` on basis-key tuples; returns one element per tuple.

    Uses the kernel when its int64 contract holds, the generic path otherwise.
    """
    if not tuples_keys:
        return []
    elems = sorted({k for t in tuples_keys for k in t})
    index = {k: e for e, k in enumerate(elems)}
    elem_exp, elem_dir = kernels.encode_elements(elems, alg.n)
    enc = kernels.Encoding(alg.domain)
    words = [tuple(v - 1 for v in w) for w, _ in words_coeffs]
    k = max(len(w) for w in words)
    if all(len(w) == k for w in words) and kernels.fits(enc, elem_exp, k, right=right):
        tuples = [[index[key] for key in t] for t in tuples_keys]
        fn = kernels.eval_right if right else kernels.eval_left
        coef, out_exp, out_dir = fn(enc, words, elem_exp, elem_dir, tuples)
        results = []
        for t in range(len(tuples)):
            acc = {}
            nz = coef[t].nonzero()[0]
            for w in nz:
                key = (tuple(int(x) for x in out_exp[t, w]), int(out_dir[t, w]) + 1)
                _acc(acc, key, words_coeffs[w][1] * int(coef[t, w]))
            results.append(alg.element(acc))
        return results
    results = []
    for t in tuples_keys:
        assignment = [alg.basis(a, i) for a, i in t]
        if right:
            out = alg.zero
            for w, c in words_coeffs:
                out = out + eval_right(w, assignment) * c
            results.append(out)
        else:
            f = LeftPolynomial(dict(words_coeffs), len(t), alg.field)
            results.append(eval_left(f, assignment))
    return results


def eval_left_basis(f: LeftPolynomial, alg: WittAlgebra, tuples_keys) -> list:
    """Evaluate ``f`` on many tuples of basis keys ``(alpha, i)``."""
    return _batch(alg, list(f.terms.items()), tuples_keys)


def s_k_r(k: int, r: int, assignment) -> WittElement:
    """The alternating form sum_s sign(s) d_r(u_s1) d_{i_s1}(u_s2) ... d_{i_s(k-1)}(u_sk) d_{i_sk}.

    Multilinear in the ``k`` arguments; general elements are expanded into basis terms.
    """
    if len(assignment) != k:
        raise ValueError(f"need exactly {k} arguments")
    alg = assignment[0].algebra
    if not 1 <= r <= alg.n:
        raise ValueError(f"r={r} out of range 1..{alg.n}")
    expanded = [list(a.terms.items()) for a in assignment]
    out = {}
    perms = list(signed_permutations(k))
    for combo in itertools.product(*expanded):
        coeff = alg.ring(1)
        for _, c in combo:
            coeff = coeff * c
        fns = [{al: alg.field(1)} for (al, _), _ in combo]
        dirs = [i for (_, i), _ in combo]
        for perm, sign in perms:
            f = fn_deriv(alg, fns[perm[0]], r)
            for t in range(1, k):
                if not f:
                    break
                f = fn_mul(alg, f, fn_deriv(alg, fns[perm[t]], dirs[perm[t - 1]]))
            if not f:
                continue
            d = dirs[perm[k - 1]]
            for al, c in f.items():
                _acc(out, (al, d), coeff * c * sign)
    return WittElement(alg, out)


# -- identity checks -------------------------------------------------------------------


@dataclass
class Verdict:
    holds: bool
    samples: int
    counterexample: tuple = None
    value: WittElement = None

    def payload(self) -> dict:
        out = {"holds": self.holds, "samples": self.samples}
        if self.counterexample is not None:
            out["counterexample"] = [str(a) for a in self.counterexample]
            out["value"] = str(self.value)
        return out


def random_tuples(rng: random.Random, window, size: int, count: int) -> list:
    return [tuple(rng.choice(window) for _ in range(size)) for _ in range(count)]


def check_identity(f: LeftPolynomial, alg: WittAlgebra, samples: int = 200, seed: int = 0,
                   window=None, tuples=None, general: int = 0) -> Verdict:
    """Sample ``f`` on basis tuples (plus ``general`` random non-basis tuples).

    A counterexample is re-evaluated on the generic path before it is returned.
    """
    window = list(window or alg.default_window())
    rng = random.Random(seed)
    nv = max(f.nvars, 1)
    if tuples is None:
        tuples = random_tuples(rng, window, nv, samples)
    if not f.terms:
        return Verdict(True, len(tuples) + general)
    values = eval_left_basis(f, alg, tuples)
    for t, v in zip(tuples, values):
        if v:
            assignment = [alg.basis(a, i) for a, i in t]
            again = eval_left(f, assignment)
            if again != v:
                raise AssertionError(f"kernel and generic evaluation disagree on {t}")
            return Verdict(False, len(tuples), tuple(assignment), again)
    for _ in range(general):
        assignment = [alg.random_element(rng, window) for _ in range(nv)]
        v = eval_left(f, assignment)
        if v:
            return Verdict(False, len(tuples) + general, tuple(assignment), v)
    return Verdict(True, len(tuples) + general)


def right_standard_words(k: int) -> list:
    """``[(word, sign)]`` for sum_s sign(s) ((t_s1 o t_s2) o ...) o t_sk."""
    return [(tuple(v + 1 for v in perm), sign) for perm, sign in signed_permutations(k)]


def operator_words(k: int) -> list:
    """Words for sum_s sign(s) probe r_{a_s1} ... r_{a_sk}; the probe is variable k+1."""
    return [((k + 1,) + tuple(v + 1 for v in perm), sign) for perm, sign in signed_permutations(k)]


def check_right_words(words_signs, alg: WittAlgebra, samples: int = 30, seed: int = 0,
                      window=None, tuples=None) -> Verdict:
    """Sample a signed sum of left-nested words on basis tuples."""
    window = list(window or alg.default_window())
    rng = random.Random(seed)
    size = max(max(w) for w, _ in words_signs)
    if tuples is None:
        tuples = random_tuples(rng, window, size, samples)
    values = _batch(alg, [(w, alg.field(s)) for w, s in words_signs], tuples, right=True)
    for t, v in zip(tuples, values):
        if v:
            assignment = [alg.basis(a, i) for a, i in t]
            again = alg.zero
            for w, s in words_signs:
                again = again + eval_right(w, assignment) * s
            if again != v:
                raise AssertionError(f"kernel and generic evaluation disagree on {t}")
            return Verdict(False, len(tuples), tuple(assignment), again)
    return Verdict(True, len(tuples))


def lower_bound_witness(alg: WittAlgebra, d: int) -> list:
    """a_1 = d_1, a_2 = x1 d_1, a_3 = x1 d_2, a_4 = x2 d_2, ... (needs d <= 2n).

    a_d o a_(d-1) o ... o a_1 is d_m (m = ceil(d/2)) and every other ordering vanishes.
    """
    n = alg.n
    if not 1 <= d <= 2 * n:
        raise ValueError(f"witness needs 1 <= d <= 2n = {2 * n}")
    out = [alg.d(1)]
    for t in range(2, d + 1):
        if t % 2 == 0:
            m = t // 2
            out.append(alg.basis(ex.unit(n, m), m))
        else:
            m = (t - 1) // 2
            out.append(alg.basis(ex.unit(n, m), m + 1))
    return out


# -- text ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|t(\d+)|([()*+-]))")


def _tokenize(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ValueError(f"cannot parse polynomial at {text[pos:]!r}")
        if mt.group(1):
            out.append(("num", mt.group(1)))
        elif mt.group(2):
            out.append(("var", int(mt.group(2))))
        else:
            out.append(("op", mt.group(3)))
        pos = mt.end()
    return out


def _flatten_left(tree):
    """A product tree to a left monomial, or ValueError if it is not right-nested."""
    if isinstance(tree, int):
        return (tree,)
    left, right = tree
    if not isinstance(left, int):
        raise ValueError("not a left monomial: the left factor of a product must be a variable")
    return (left,) + _flatten_left(right)


def parse_polynomial(text: str, nvars=None, field=QQ) -> LeftPolynomial:
    """Parse ``t1*(t2*t3) - 2*t2*(t1*t3)``; ``*`` is the product, right-nested by default."""
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take(kind, val=None):
        nonlocal pos
        k, v = peek()
        if k != kind or (val is not None and v != val):
            raise ValueError(f"expected {val or kind} in {text!r}")
        pos += 1
        return v

    def factor():
        k, v = peek()
        if k == "var":
            take("var")
            return v
        take("op", "(")
        tr = product()
        take("op", ")")
        return tr

    def product():
        left = factor()
        if peek() == ("op", "*"):
            take("op", "*")
            return (left, product())
        return left

    terms = {}
    if [t for t in toks] == [("num", "0")]:
        return LeftPolynomial({}, nvars or 1, field)
    first = True
    while pos < len(toks):
        sign = 1
        k, v = peek()
        if k == "op" and v in "+-":
            take("op")
            sign = -1 if v == "-" else 1
        elif not first:
            raise ValueError(f"missing sign between terms in {text!r}")
        first = False
        coef = field(1)
        if peek()[0] == "num":
            coef = field(Fraction(take("num")))
            take("op", "*")
        word = _flatten_left(product())
        terms[word] = terms.get(word, field(0)) + coef * sign
    nv = nvars or max((max(w) for w in terms), default=1)
    return LeftPolynomial(terms, nv, field)


def format_word(word) -> str:
    if len(word) == 1:
        return f"t{word[0]}"
    inner = format_word(word[1:])
    if len(word) > 2:
        inner = f"({inner})"
    return f"t{word[0]}*{inner}"


def format_polynomial(f: LeftPolynomial) -> str:
    if not f.terms:
        return "0"
    signed = not isinstance(f.field, PrimeField)
    pieces = []
    for word, c in f.items():
        neg = signed and c < 0
        if neg:
            c = -c
        cs = f.field.format(c)
        body = format_word(word) if cs == "1" else f"{cs}*{format_word(word)}"
        pieces.append((neg, body))
    s = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        s += (" - " if neg else " + ") + body
    return s


# -- two-product identities -------------------------------------------------------------


def _mixed_table():
    from .witt import rsym_defect, star

    def left_comm_star(a, b, c):
        return star(a, star(b, c)) - star(b, star(a, c))

    def circ_star(a, b, c):
        return circ(a, star(b, c)) - star(b, circ(a, c))

    def commutator_gap(a, b, c):
        return star(star(a, b) - star(b, a) - circ(a, b) + circ(b, a), c)

    def five_term(a, b, c):
        return (star(circ(a, b) - circ(b, a), c) + star(a, circ(c, b)) - circ(star(a, c), b)
                - star(b, circ(c, a)) + circ(star(b, c), a))

    return {
        "right-symmetry": rsym_defect,
        "star-left-commutativity": left_comm_star,
        "circ-star-exchange": circ_star,
        "bracket-agreement": commutator_gap,
        "five-term": five_term,
    }


MIXED_IDENTITIES = _mixed_table()


def novikov_defect(a, b, c) -> WittElement:
    """a o (b o c) - b o (a o c)."""
    return circ(a, circ(b, c)) - circ(b, circ(a, c))


def check_trilinear(fn, alg: WittAlgebra, samples: int = 200, seed: int = 0, window=None,
                    general: int = 0) -> Verdict:
    """Sample a trilinear map on basis triples (and ``general`` random triples) for a zero."""
    window = list(window or alg.default_window())
    rng = random.Random(seed)
    for t in random_tuples(rng, window, 3, samples):
        args = [alg.basis(a, i) for a, i in t]
        v = fn(*args)
        if v:
            return Verdict(False, samples, tuple(args), v)
    for _ in range(general):
        args = [alg.random_element(rng, window) for _ in range(3)]
        v = fn(*args)
        if v:
            return Verdict(False, samples + general, tuple(args), v)
    return Verdict(True, samples + general)


def novikov_witness(alg: WittAlgebra) -> tuple:
    """a = x2 d1, b = x1 d2, c = x1 d1 (needs n >= 2)."""
    if alg.n < 2:
        raise ValueError("the witness lives in rank >= 2")
    n = alg.n
    return (alg.basis(ex.unit(n, 2), 1), alg.basis(ex.unit(n, 1), 2), alg.basis(ex.unit(n, 1), 1))
