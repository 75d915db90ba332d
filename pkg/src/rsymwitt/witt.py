"""Right-symmetric Witt algebras W_n, W_n^+ and W_n(m).

Elements are finite sums of basis vector fields x^a d_i. The two products are

    u d_i o v d_j = v d_j(u) d_i        (right-symmetric product ``circ``)
    u d_i * v d_j = d_i(u) v d_j        (``star``)

Directions are 1-based throughout.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import exponent as ex
from .exponent import ExponentDomain
from .linalg import Echelon
from .scalar import QQ, PrimeField


@dataclass(frozen=True)
class WittAlgebra:
    """A right-symmetric Witt algebra: exponent domain, base field and coefficient ring.

    ``ring`` defaults to the base field; a :class:`~rsymwitt.scalar.SeriesRing`
    gives elements with truncated-series coefficients.
    """

    domain: ExponentDomain
    field: object = None
    ring: object = dc_field(default=None, compare=True)

    def __post_init__(self):
        natural = self.domain.natural_field()
        f = self.field if self.field is not None else natural
        if self.domain.kind == ex.DIVPOW and f != natural:
            raise ValueError(f"divided powers over F_{self.domain.p} need field GF({self.domain.p})")
        object.__setattr__(self, "field", f)
        if self.ring is None:
            object.__setattr__(self, "ring", f)

    @classmethod
    def laurent(cls, n: int, field=QQ, ring=None) -> "WittAlgebra":
        return cls(ExponentDomain.laurent(n), field, ring)

    @classmethod
    def poly(cls, n: int, field=QQ) -> "WittAlgebra":
        return cls(ExponentDomain.poly(n), field)

    @classmethod
    def divpow(cls, p: int, m) -> "WittAlgebra":
        return cls(ExponentDomain.divpow(p, m))

    @property
    def n(self) -> int:
        return self.domain.n

    @property
    def family(self) -> str:
        return self.domain.kind

    @property
    def divided(self) -> bool:
        return self.domain.kind == ex.DIVPOW

    def __str__(self):
        if self.ring != self.field:
            return f"W[{self.domain}, {self.field!r}, coefficients {self.ring!r}]"
        return f"W[{self.domain}, {self.field!r}]"

    # -- constructors ---------------------------------------------------------

    @property
    def zero(self) -> "WittElement":
        return WittElement(self, {})

    def basis(self, alpha, i: int) -> "WittElement":
        return self.element({(tuple(alpha), i): 1})

    def d(self, i: int) -> "WittElement":
        """The constant vector field d_i."""
        return self.basis((0,) * self.n, i)

    def e(self, i: int) -> "WittElement":
        """Rank one only: e_i = x^(i+1) d."""
        if self.n != 1:
            raise ValueError("e_i is defined for rank one")
        return self.basis((i + 1,), 1)

    def element(self, terms) -> "WittElement":
        clean = {}
        for (alpha, i), c in terms.items():
            alpha = tuple(alpha)
            if not 1 <= i <= self.n:
                raise ValueError(f"direction {i} out of range 1..{self.n}")
            if not ex.contains(self.domain, alpha):
                raise ValueError(f"{alpha} outside {self.domain}")
            c = self.ring(c)
            if c:
                key = (alpha, i)
                s = clean.get(key)
                s = c if s is None else s + c
                if s:
                    clean[key] = s
                else:
                    clean.pop(key, None)
        return WittElement(self, clean)

    # -- windows --------------------------------------------------------------

    def basis_box(self, lo: int, hi: int) -> list:
        """Basis keys ``(alpha, i)`` with every exponent entry in [lo, hi]."""
        return [(a, i) for i in range(1, self.n + 1) for a in ex.box(self.domain, lo, hi)]

    def basis_degree(self, k: int) -> list:
        """Basis keys with non-negative exponents of total degree <= k."""
        return [(a, i) for i in range(1, self.n + 1) for a in ex.total_degree_at_most(self.domain, k)]

    def all_basis(self) -> list:
        return [(a, i) for i in range(1, self.n + 1) for a in ex.all_exponents(self.domain)]

    def default_window(self) -> list:
        """[0,2]^n for polynomial-type families, [-2,2]^n for Laurent, everything for divided powers."""
        if self.divided:
            return self.all_basis()
        if self.family == ex.LAURENT:
            return self.basis_box(-2, 2)
        return self.basis_box(0, 2)

    def random_element(self, rng: random.Random, window=None, terms: int = 3, coeff_range: int = 3):
        window = window or self.default_window()
        out = {}
        for _ in range(terms):
            key = rng.choice(window)
            c = rng.randint(-coeff_range, coeff_range)
            if isinstance(self.field, PrimeField):
                c %= self.field.p
            elif rng.random() < 0.25:
                c = Fraction(c, rng.randint(1, 3))
            out[key] = out.get(key, 0) + c
        return self.element(out)

    # -- text -----------------------------------------------------------------

    def parse(self, text: str) -> "WittElement":
        return parse_element(self, text)


class WittElement:
    """An immutable finite sum of basis vector fields with nonzero coefficients."""

    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: WittAlgebra, terms: dict):
        self.algebra = algebra
        self.terms = terms
        self._hash = None

    def _check(self, other):
        if not isinstance(other, WittElement):
            raise TypeError(f"expected a Witt element, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise ValueError(f"algebra mismatch: {self.algebra} vs {other.algebra}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return WittElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return WittElement(self.algebra, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, WittElement):
            raise TypeError("use circ(a, b) or star(a, b) for products of elements")
        out = {}
        for k, c in self.terms.items():
            v = c * scalar
            if v:
                out[k] = v
        return WittElement(self.algebra, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, WittElement):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.algebra, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        """Terms in canonical order: direction-major, then lexicographic exponent."""
        return sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))

    def coefficient(self, alpha, i):
        return self.terms.get((tuple(alpha), i), self.algebra.ring(0))

    def is_homogeneous(self) -> bool:
        return len({sum(a) - 1 for a, _ in self.terms}) <= 1

    def weight(self):
        ws = {sum(a) - 1 for a, _ in self.terms}
        if len(ws) != 1:
            raise ValueError("element is not homogeneous")
        return ws.pop()

    def times_function(self, fn: dict) -> "WittElement":
        """Multiply every coefficient function by ``fn`` (a dict exponent -> scalar)."""
        alg = self.algebra
        out = {}
        for (a, i), c in self.terms.items():
            for b, f in fn.items():
                r = ex.monomial_product_coeff(alg.domain, a, b, alg.field)
                if r is None:
                    continue
                k, g = r
                _acc(out, (g, i), c * f * k)
        return WittElement(alg, out)

    def __repr__(self):
        return f"WittElement({format_element(self)!r})"

    def __str__(self):
        return format_element(self)


def _acc(out: dict, key, value):
    if not value:
        return
    s = out.get(key)
    s = value if s is None else s + value
    if s:
        out[key] = s
    else:
        out.pop(key, None)


# -- products -------------------------------------------------------------------


def _deriv(alg: WittAlgebra, alpha, j):
    return ex.derivation_coeff(alg.domain, alpha, j, alg.field)


def _mul(alg: WittAlgebra, alpha, beta):
    return ex.monomial_product_coeff(alg.domain, alpha, beta, alg.field)


def circ_basis(alg: WittAlgebra, a, i, b, j):
    """x^a d_i o x^b d_j as ``(coeff, (exponent, direction))`` or ``None``."""
    r = _deriv(alg, a, j)
    if r is None:
        return None
    c1, g = r
    r = _mul(alg, b, g)
    if r is None:
        return None
    c2, h = r
    return c1 * c2, (h, i)


def star_basis(alg: WittAlgebra, a, i, b, j):
    """x^a d_i * x^b d_j as ``(coeff, (exponent, direction))`` or ``None``."""
    r = _deriv(alg, a, i)
    if r is None:
        return None
    c1, g = r
    r = _mul(alg, g, b)
    if r is None:
        return None
    c2, h = r
    return c1 * c2, (h, j)


def _bilinear(rule, a: WittElement, b: WittElement) -> WittElement:
    a._check(b)
    alg = a.algebra
    out = {}
    for (al, i), ca in a.terms.items():
        for (be, j), cb in b.terms.items():
            r = rule(alg, al, i, be, j)
            if r is None:
                continue
            k, key = r
            _acc(out, key, ca * cb * k)
    return WittElement(alg, out)


def circ(a: WittElement, b: WittElement) -> WittElement:
    return _bilinear(circ_basis, a, b)


def star(a: WittElement, b: WittElement) -> WittElement:
    return _bilinear(star_basis, a, b)


def bracket(a: WittElement, b: WittElement) -> WittElement:
    """[a, b] = a o b - b o a."""
    return circ(a, b) - circ(b, a)


def associator(a: WittElement, b: WittElement, c: WittElement) -> WittElement:
    """(a, b, c) = a o (b o c) - (a o b) o c."""
    return circ(a, circ(b, c)) - circ(circ(a, b), c)


def rsym_defect(a, b, c) -> WittElement:
    return associator(a, b, c) - associator(a, c, b)


def weight_decompose(a: WittElement) -> dict:
    """Split into homogeneous components; weight of x^a d_i is |a| - 1."""
    parts: dict[int, dict] = {}
    for (al, i), c in a.terms.items():
        parts.setdefault(sum(al) - 1, {})[(al, i)] = c
    return {w: WittElement(a.algebra, t) for w, t in sorted(parts.items())}


# -- coefficient functions --------------------------------------------------------


def fn_mul(alg: WittAlgebra, f: dict, g: dict) -> dict:
    out = {}
    for a, ca in f.items():
        for b, cb in g.items():
            r = _mul(alg, a, b)
            if r is not None:
                _acc(out, r[1], ca * cb * r[0])
    return out


def fn_deriv(alg: WittAlgebra, f: dict, j: int) -> dict:
    out = {}
    for a, c in f.items():
        r = _deriv(alg, a, j)
        if r is not None:
            _acc(out, r[1], c * r[0])
    return out


def split_directions(a: WittElement) -> dict:
    """``{i: u_i}`` with a = sum_i u_i d_i and each u_i a dict exponent -> scalar."""
    out: dict[int, dict] = {}
    for (al, i), c in a.terms.items():
        out.setdefault(i, {})[al] = c
    return out


def from_functions(alg: WittAlgebra, fns: dict) -> WittElement:
    terms = {}
    for i, f in fns.items():
        for al, c in f.items():
            _acc(terms, (al, i), c)
    return WittElement(alg, terms)


# -- centers and normalizers ---------------------------------------------------------


def _elements_of(alg, window):
    return [alg.basis(a, i) for a, i in window]


def _solution_elements(alg, window, kernel):
    out = []
    for vec in kernel:
        out.append(alg.element({window[c]: v for c, v in vec.items()}))
    return out


def left_center_basis(alg: WittAlgebra, window) -> list:
    """Basis of {a in span(window) : a o b = 0 for every b in window}."""
    window = list(window)
    if not window:
        raise ValueError("empty window")
    rows: dict = {}
    for b_al, j in window:
        for col, (a_al, i) in enumerate(window):
            r = circ_basis(alg, a_al, i, b_al, j)
            if r is not None:
                rows.setdefault(((b_al, j), r[1]), {})[col] = r[0]
    ech = Echelon(alg.field)
    for row in rows.values():
        ech.add(row)
    return _solution_elements(alg, window, ech.nullspace(len(window)))


def normalizer_of_center_basis(alg: WittAlgebra, window, center=None) -> list:
    """Basis of {a in span(window) : a o z in span(center) for every center generator z}."""
    window = list(window)
    center = left_center_basis(alg, window) if center is None else center
    # residue map v -> v - sum_k v[pivot_k] C_k kills exactly span(center)
    keys = sorted({k for z in center for k in z.terms})
    index = {k: t for t, k in enumerate(keys)}
    cech = Echelon(alg.field)
    for z in center:
        cech.add({index[k]: c for k, c in z.terms.items()})
    crows = {keys[pv]: {keys[c]: v for c, v in row.items()} for pv, row in cech.rows.items()}
    rows: dict = {}
    for zi, z in enumerate(center):
        for col, (a_al, i) in enumerate(window):
            v = circ(alg.basis(a_al, i), z)
            res = dict(v.terms)
            for pk, prow in crows.items():
                coef = v.terms.get(pk)
                if not coef:
                    continue
                scale = coef / alg.field(prow[pk])
                for k, c in prow.items():
                    _acc(res, k, -scale * c)
            for k, c in res.items():
                rows.setdefault((zi, k), {})[col] = c
    ech = Echelon(alg.field)
    for row in rows.values():
        ech.add(row)
    return _solution_elements(alg, window, ech.nullspace(len(window)))


def span_rank(elements) -> int:
    """Dimension of the span of a list of elements of one algebra."""
    if not elements:
        return 0
    keys = sorted({k for e in elements for k in e.terms})
    index = {k: t for t, k in enumerate(keys)}
    ech = Echelon(elements[0].algebra.field)
    for e in elements:
        ech.add({index[k]: c for k, c in e.terms.items()})
    return ech.rank


def same_span(xs, ys) -> bool:
    r = span_rank(list(xs))
    return r == span_rank(list(ys)) == span_rank(list(xs) + list(ys))


# -- text ---------------------------------------------------------------------------

_COEF = r"\d+(?:/\d+)?"
_MONO = r"x\d+(?:\^(?:\(\d+\)|-?\d+))?(?:\*x\d+(?:\^(?:\(\d+\)|-?\d+))?)*"
_TERM = re.compile(
    rf"\s*(?P<sign>[+-])?\s*(?:(?P<coef>{_COEF})(?:\*(?P<mono1>{_MONO}))?|(?P<mono2>{_MONO}))?\s*d(?P<dir>\d+)\s*"
)


def parse_element(alg: WittAlgebra, text: str) -> WittElement:
    """Parse ``3*x1^2*x2 d1 - 1/2 d2``; divided powers use ``x1^(3)``."""
    text = text.strip()
    if text == "0":
        return alg.zero
    pos = 0
    terms = {}
    first = True
    while pos < len(text):
        mt = _TERM.match(text, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse element at {text[pos:]!r}")
        if not first and mt.group("sign") is None:
            raise ValueError(f"missing sign before {text[pos:]!r}")
        first = False
        coef = alg.field.parse(mt.group("coef")) if mt.group("coef") else alg.field(1)
        if mt.group("sign") == "-":
            coef = -coef
        mono = mt.group("mono1") or mt.group("mono2") or "1"
        alpha = ex.parse_monomial(mono, alg.n, alg.divided)
        key = (alpha, int(mt.group("dir")))
        terms[key] = terms.get(key, 0) + coef
        pos = mt.end()
    return alg.element(terms)


def format_element(a: WittElement) -> str:
    alg = a.algebra
    if not a.terms:
        return "0"
    plain = alg.ring == alg.field
    signed = alg.field is QQ or alg.field == QQ
    pieces = []
    for (al, i), c in a.items():
        neg = False
        if plain and signed and c < 0:
            neg, c = True, -c
        if plain:
            cs = alg.field.format(c)
        else:
            cs = f"({c})"
        mono = ex.format_monomial(al, alg.divided)
        if mono == "1":
            body = f"d{i}" if cs == "1" else f"{cs} d{i}"
        else:
            body = f"{mono} d{i}" if cs == "1" else f"{cs}*{mono} d{i}"
        pieces.append((neg, body))
    s = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        s += (" - " if neg else " + ") + body
    return s


# -- structure checks -------------------------------------------------------------------


def a0_matrix_failures(n: int) -> list:
    """Pairs where x_i d_j -> E_ji fails to be multiplicative (empty means isomorphism).

    Also fails if the images are not the n^2 distinct matrix units.
    """
    from .cochain import MatrixAlgebra

    alg = WittAlgebra.poly(n)
    mat = MatrixAlgebra(n)
    gens = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]

    def elem(i, j):
        return alg.basis(ex.unit(n, i), j)

    def image(a: WittElement):
        m = mat.zero()
        for (al, j), c in a.terms.items():
            if sum(al) != 1 or min(al) < 0:
                raise ValueError(f"{a} is not in the weight-0 part")
            i = al.index(1) + 1
            m = mat.add(m, mat.scale(mat.unit(j - 1, i - 1), c))
        return m

    failures = []
    if len({image(elem(i, j)) for i, j in gens}) != n * n:
        failures.append("images are not distinct matrix units")
    for i, j in gens:
        for k, l in gens:
            a, b = elem(i, j), elem(k, l)
            if image(circ(a, b)) != mat.mul(image(a), image(b)):
                failures.append(((i, j), (k, l)))
    return failures


def center_action_failures(alg: WittAlgebra, window, depth: int = 3) -> dict:
    """Exhaustive checks of the center/normalizer relations on basis elements.

    For z in the center: r_z(b) = b o z is a derivation. For a in N(Z) and any b:
    a o (b o z) = (a o b) o z. For a_1..a_k in N(Z), k <= depth:
    a_1 o (... o (a_k o z)) = (a_1 o (... o a_k)) o z.
    Returns failure counts per check together with the number of cases tried.
    """
    center = left_center_basis(alg, window)
    normal = normalizer_of_center_basis(alg, window, center)
    elems = _elements_of(alg, window)
    out = {"center": len(center), "normalizer": len(normal)}
    fails = tried = 0
    for z in center:
        for a in elems:
            for b in elems:
                tried += 1
                if circ(circ(a, b), z) != circ(circ(a, z), b) + circ(a, circ(b, z)):
                    fails += 1
    out["derivation"] = (fails, tried)
    fails = tried = 0
    for z in center:
        for a in normal:
            for b in elems:
                tried += 1
                if circ(a, circ(b, z)) != circ(circ(a, b), z):
                    fails += 1
    out["normalizer-associative"] = (fails, tried)
    fails = tried = 0

    for k in range(1, depth + 1):
        for word in itertools.product(normal, repeat=k):
            inner = word[-1]
            for a in reversed(word[:-1]):
                inner = circ(a, inner)
            for z in center:
                tried += 1
                lhs = circ(word[-1], z)
                for a in reversed(word[:-1]):
                    lhs = circ(a, lhs)
                if lhs != circ(inner, z):
                    fails += 1
    out["iterated"] = (fails, tried)
    return out
