"""Deformations of the right-symmetric algebra W_1 (Laurent coefficients).

On the basis e_i = x^(i+1) d a bilinear map of the form (e_i, e_j) -> P(i, j) e_(i+j+w)
is an :class:`IndexedCochain` ``(w, P)``. The base product is ``(0, i + 1)``.

A deformed product is a sum over eps-monomials of such maps. Its right-symmetry
defect is bilinear in the product, and for indexed cochains it is an explicit
polynomial in the basis indices (i, j, k), so every vanishing check below is an
exact polynomial identity rather than a sample.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import linalg
from .linalg import Echelon
from .scalar import NPARAMS, QQ, SeriesRing, TruncatedSeries
from .witt import WittAlgebra, WittElement, _acc, bracket, circ, fn_deriv, fn_mul, from_functions


# -- polynomials in the basis indices -------------------------------------------------------


class IndexPoly:
    """Sparse polynomial with rational coefficients; keys are exponent tuples."""

    __slots__ = ("nvars", "terms")

    def __init__(self, terms: dict, nvars: int):
        clean = {}
        for e, c in terms.items():
            c = Fraction(c)
            if c:
                e = tuple(e)
                s = clean.get(e, 0) + c
                if s:
                    clean[e] = s
                else:
                    clean.pop(e, None)
        self.nvars = nvars
        self.terms = clean

    @classmethod
    def var(cls, k: int, nvars: int) -> "IndexPoly":
        e = [0] * nvars
        e[k] = 1
        return cls({tuple(e): 1}, nvars)

    @classmethod
    def const(cls, c, nvars: int) -> "IndexPoly":
        return cls({(0,) * nvars: c}, nvars)

    def _lift(self, other):
        if isinstance(other, IndexPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return IndexPoly.const(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return IndexPoly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return IndexPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, IndexPoly):
            return IndexPoly({e: c * other for e, c in self.terms.items()}, self.nvars)
        other = self._lift(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return IndexPoly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = IndexPoly.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, IndexPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return self == self._lift(other)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def subs(self, values) -> "IndexPoly":
        """Substitute polynomials (all in one common ring) for the variables."""
        values = list(values)
        nv = values[0].nvars
        powers = [[IndexPoly.const(1, nv)] for _ in values]
        out = IndexPoly({}, nv)
        for e, c in self.terms.items():
            term = IndexPoly.const(c, nv)
            for v, k in enumerate(e):
                while len(powers[v]) <= k:
                    powers[v].append(powers[v][-1] * values[v])
                term = term * powers[v][k]
            out = out + term
        return out

    def __call__(self, *vals) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                t *= Fraction(x) ** k
            total += t
        return total

    def format(self, names=None) -> str:
        names = names or ("i", "j", "k")[: self.nvars]
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            neg = c < 0
            a = -c if neg else c
            cs = str(a)
            body = (mono if cs == "1" else f"{cs}*{mono}") if mono else cs
            pieces.append((neg, body))
        s = ("-" if pieces[0][0] else "") + pieces[0][1]
        for neg, body in pieces[1:]:
            s += (" - " if neg else " + ") + body
        return s

    def __repr__(self):
        return f"IndexPoly({self.format()!r})"

    __str__ = format


I = IndexPoly.var(0, 2)
J = IndexPoly.var(1, 2)
_I3, _J3, _K3 = (IndexPoly.var(t, 3) for t in range(3))


def falling(p: IndexPoly, s: int) -> IndexPoly:
    """p (p - 1) ... (p - s + 1)."""
    out = IndexPoly.const(1, p.nvars)
    for t in range(s):
        out = out * (p - t)
    return out


# -- indexed cochains -------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexedCochain:
    w: int
    P: IndexPoly

    def coefficient(self, i: int, j: int) -> Fraction:
        return self.P(i, j)

    def __call__(self, a: WittElement, b: WittElement) -> WittElement:
        """Apply to elements of a rank-one Laurent Witt algebra."""
        alg = a.algebra
        out = {}
        for ((al,), _), ca in a.terms.items():
            for ((be,), _), cb in b.terms.items():
                c = self.P(al - 1, be - 1)
                if c:
                    _acc(out, ((al + be - 1 + self.w,), 1), ca * cb * c)
        return WittElement(alg, out)

    def scaled(self, c) -> "IndexedCochain":
        return IndexedCochain(self.w, self.P * c)

    def payload(self) -> dict:
        return {"w": self.w, "P": self.P.format()}

    def __str__(self):
        return f"(w={self.w}, P={self.P.format()})"


BASE = IndexedCochain(0, I + 1)
PSI = {
    1: IndexedCochain(0, IndexPoly.const(1, 2)),
    2: IndexedCochain(-1, I + 1),
    3: IndexedCochain(0, -I * (J + 1)),
    4: IndexedCochain(-1, (I + 1) * (J + 1)),
}


def psi_from_functions(k: int, a: WittElement, b: WittElement) -> WittElement:
    """The four cocycles written on coefficient functions u, v of a = u d, b = v d."""
    alg = a.algebra
    u = {al: c for (al, _), c in a.terms.items()}
    v = {al: c for (al, _), c in b.terms.items()}
    inv_x = {(-1,): alg.field(1)}
    x = {(1,): alg.field(1)}
    du, dv = fn_deriv(alg, u, 1), fn_deriv(alg, v, 1)
    if k == 1:
        f = fn_mul(alg, fn_mul(alg, inv_x, u), v)
    elif k == 2:
        f = fn_mul(alg, fn_mul(alg, inv_x, du), v)
    elif k == 3:
        g = dict(u)
        for al, c in fn_mul(alg, x, du).items():
            _acc(g, al, -c)
        f = fn_mul(alg, g, dv)
    elif k == 4:
        f = fn_mul(alg, du, dv)
    else:
        raise ValueError("cocycles are numbered 1..4")
    return from_functions(alg, {1: f})


def vf_commutator(a: WittElement, b: WittElement) -> WittElement:
    """Commutator of vector fields as differential operators, [X, Y] = XY - YX.

    Equals b o a - a o b in the right-symmetric product.
    """
    return bracket(b, a)


# -- defects ------------------------------------------------------------------------------------

Graded = dict  # shift w -> IndexPoly in (i, j)


def pair_defect(outer: IndexedCochain, inner: IndexedCochain):
    """Right-symmetry defect of (outer after inner) on (e_i, e_j, e_k).

    Returns ``(shift, poly in i, j, k)`` for
    phi(a, chi(b, c)) - phi(chi(a, b), c) - phi(a, chi(c, b)) + phi(chi(a, c), b).
    """
    i, j, k = _I3, _J3, _K3
    P1, P2, w2 = outer.P, inner.P, inner.w
    val = (P2.subs([j, k]) * P1.subs([i, j + k + w2])
           - P2.subs([i, j]) * P1.subs([i + j + w2, k])
           - P2.subs([k, j]) * P1.subs([i, k + j + w2])
           + P2.subs([i, k]) * P1.subs([i + k + w2, j]))
    return outer.w + inner.w, val


def graded_defect(phi: Graded, chi: Graded) -> dict:
    out = {}
    for w1, P1 in phi.items():
        for w2, P2 in chi.items():
            W, val = pair_defect(IndexedCochain(w1, P1), IndexedCochain(w2, P2))
            out[W] = out.get(W, IndexPoly({}, 3)) + val
    return {W: v for W, v in out.items() if v}


def linearized(w: int, P: IndexPoly) -> IndexPoly:
    """Derivative of the defect at the base product in the direction (w, P)."""
    c = IndexedCochain(w, P)
    return pair_defect(BASE, c)[1] + pair_defect(c, BASE)[1]


def _mono_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


ZERO_MONO = (0,) * NPARAMS


# -- deformed products ----------------------------------------------------------------------------


class DeformedProduct:
    """a o_eps b = a o b + sum_t c_t psi_t(a, b), with c_t truncated eps-series."""

    def __init__(self, terms, order: int):
        self.order = order
        self.ring = SeriesRing(order)
        self.terms = [(self.ring(c), psi) for c, psi in terms]

    @property
    def algebra(self) -> WittAlgebra:
        return WittAlgebra.laurent(1, ring=self.ring)

    def lift(self, a: WittElement) -> WittElement:
        return self.algebra.element(dict(a.terms))

    def __call__(self, a: WittElement, b: WittElement) -> WittElement:
        alg = self.algebra
        if a.algebra != alg:
            a = self.lift(a)
        if b.algebra != alg:
            b = self.lift(b)
        out = circ(a, b)
        for c, psi in self.terms:
            v = psi(a, b)
            if v:
                out = out + v * c
        return out

    def associator(self, a, b, c):
        return self(a, self(b, c)) - self(self(a, b), c)

    def rsym_defect(self, a, b, c) -> WittElement:
        """(a, b, c) - (a, c, b) for this product, exact modulo eps^order."""
        a, b, c = self.lift(a), self.lift(b), self.lift(c)
        return self.associator(a, b, c) - self.associator(a, c, b)

    def graded(self) -> dict:
        """``{eps-monomial: {shift: P}}`` including the base product at the zero monomial."""
        out = {ZERO_MONO: {0: BASE.P}}
        for c, psi in self.terms:
            for mono, v in c.coeffs.items():
                comp = out.setdefault(mono, {})
                comp[psi.w] = comp.get(psi.w, IndexPoly({}, 2)) + psi.P * v
        cleaned = {}
        for mono, comp in out.items():
            comp = {w: P for w, P in comp.items() if P}
            if comp:
                cleaned[mono] = comp
        return cleaned

    def symbolic_defect(self) -> dict:
        """``{eps-monomial: {shift: poly in i, j, k}}``; empty iff right-symmetric mod eps^order."""
        g = self.graded()
        out = {}
        for (m1, phi), (m2, chi) in itertools.product(g.items(), repeat=2):
            m = _mono_add(m1, m2)
            if sum(m) >= self.order:
                continue
            for W, v in graded_defect(phi, chi).items():
                comp = out.setdefault(m, {})
                comp[W] = comp.get(W, IndexPoly({}, 3)) + v
        return {m: {W: v for W, v in comp.items() if v} for m, comp in out.items()
                if any(comp.values())}


def eps_monomial(k: int, power: int = 1) -> tuple:
    e = [0] * NPARAMS
    e[k - 1] = power
    return tuple(e)


def osborn_product(order: int = 3) -> DeformedProduct:
    return DeformedProduct(
        [(TruncatedSeries.eps(1, order), PSI[1]), (TruncatedSeries.eps(2, order), PSI[2])], order
    )


def eps4_product(order: int = 5) -> DeformedProduct:
    """(a, b) -> d(a) sum_l eps4^l d^l(b): order l is (w=-l, P=(i+1)(j+1)_l)."""
    terms = []
    for l in range(1, order):
        terms.append((TruncatedSeries.eps(4, order, l), IndexedCochain(-l, (I + 1) * falling(J + 1, l))))
    return DeformedProduct(terms, order)


def eps3_closed_form(a: WittElement, b: WittElement, order: int) -> WittElement:
    """d(a) b + [x d, a] (sum_{s>=1} (-eps3)^s x^(s-1) d^s / ((eps3+1)...(s eps3+1)))(b).

    Divisions are expanded as truncated geometric series.
    """
    ring = SeriesRing(order)
    alg = WittAlgebra.laurent(1, ring=ring)
    base = WittAlgebra.laurent(1)
    x_d = base.basis((1,), 1)
    comm = vf_commutator(x_d, a)
    cu = {al: c for (al, _), c in comm.terms.items()}
    v = {al: c for (al, _), c in b.terms.items()}
    out = alg.element(dict(circ(a, b).terms))
    eps = TruncatedSeries.eps(3, order)
    weight = ring.one
    dv = dict(v)
    for s in range(1, order):
        weight = weight * (-eps) / (ring.one + eps * s)
        dv = fn_deriv(base, dv, 1)
        op = fn_mul(base, {(s - 1,): Fraction(1)}, dv)
        f = fn_mul(base, cu, op)
        out = out + alg.element({(al, 1): weight * c for al, c in f.items()})
    return out


# -- prolongation solver ------------------------------------------------------------------------


def _ansatz(D: int):
    """Basis i^a (j+1)^b of degree <= D, highest power of i first.

    Cocycles in the ansatz are pivoted on their highest i-power, so a correction in
    normal form uses as few powers of i as the equation allows.
    """
    cols = sorted(((a, b) for a in range(D + 1) for b in range(D + 1 - a)), key=lambda t: (-t[0], t[1]))
    return cols, [I ** a * (J + 1) ** b for a, b in cols]


def _normal_form(x: dict, kernel: list) -> dict:
    ech = Echelon(QQ)
    for vec in kernel:
        ech.add(vec)
    x = {c: Fraction(v) for c, v in x.items()}
    for piv in ech.pivots():
        if x.get(piv):
            row = ech.rows[piv]
            f = x[piv] / row[piv]
            for c, v in row.items():
                nv = x.get(c, 0) - f * v
                if nv:
                    x[c] = nv
                else:
                    x.pop(c, None)
    return x


def solve_shift(w: int, rhs: IndexPoly, D: int):
    """Solve linearized(w, P) = rhs for P of degree <= D.

    Returns ``(P, None)`` in normal form or ``(None, certificate)``; the certificate
    maps (i, j, k)-monomials to multipliers y with y.A = 0 and y.b != 0.
    """
    cols, polys = _ansatz(D)
    eqs = {}
    for c, p in enumerate(polys):
        for mono, v in linearized(w, p).terms.items():
            eqs.setdefault(mono, {})[c] = v
    monos = sorted(set(eqs) | set(rhs.terms))
    rows = [eqs.get(m, {}) for m in monos]
    b = [rhs.terms.get(m, 0) for m in monos]
    x, cert = linalg.solve(rows, b, len(cols), QQ)
    if x is None:
        return None, {monos[r]: y for r, y in sorted(cert.items())}
    x = _normal_form(x, linalg.nullspace(rows, len(cols), QQ))
    P = IndexPoly({}, 2)
    for c, v in x.items():
        P = P + polys[c] * v
    return P, None


def _pointwise_row(w: int, i: int, j: int, k: int) -> dict:
    """linearized(w, c) at (i, j, k) as a combination of the values c(p, q)."""
    row = {}

    def put(pt, v):
        if v:
            row[pt] = row.get(pt, 0) + v
            if not row[pt]:
                del row[pt]

    put((j, k), i + 1)
    put((i, j), -(i + j + w + 1))
    put((k, j), -(i + 1))
    put((i, k), i + k + w + 1)
    put((i, j + k), j + 1)
    put((i + j, k), -(i + 1))
    put((i, k + j), -(k + 1))
    put((i + k, j), i + 1)
    return row


def pointwise_certificate(w: int, rhs: IndexPoly, radius: int = 3):
    """Look for an obstruction valid for every cochain at shift ``w``, not only polynomial ones.

    The equation is imposed at every triple in [-radius, radius]^3 with each value
    c(p, q) as an independent unknown. Returns ``None`` when that finite system is
    solvable, else ``{triple: weight}`` whose weighted sum cancels every c(p, q) but
    not the right-hand side.
    """
    triples = list(itertools.product(range(-radius, radius + 1), repeat=3))
    points = {}
    rows, b = [], []
    for t in triples:
        row = _pointwise_row(w, *t)
        rows.append({points.setdefault(pt, len(points)): v for pt, v in row.items()})
        b.append(rhs(*t))
    x, cert = linalg.solve(rows, b, len(points), QQ)
    if x is not None:
        return None
    return {triples[r]: y for r, y in sorted(cert.items())}


def check_pointwise_certificate(w: int, rhs: IndexPoly, cert: dict) -> bool:
    """Independent recheck: the weights cancel every unknown value and not the target."""
    total = {}
    for t, y in cert.items():
        for pt, v in _pointwise_row(w, *t).items():
            total[pt] = total.get(pt, 0) + y * v
    return not any(total.values()) and sum(y * rhs(*t) for t, y in cert.items()) != 0


@dataclass
class Failure:
    kind: str  # "ansatz-too-small" or "inconsistent"
    monomial: tuple
    shift: int
    degree: int
    rhs: IndexPoly
    certificate: dict = None
    solvable_at: int = None
    pointwise: dict = None

    def payload(self) -> dict:
        out = {
            "kind": self.kind,
            "monomial": list(self.monomial),
            "order": sum(self.monomial),
            "shift": self.shift,
            "degree_bound": self.degree,
            "rhs": self.rhs.format(),
        }
        if self.solvable_at is not None:
            out["solvable_at_degree"] = self.solvable_at
        if self.certificate is not None:
            out["certificate_size"] = len(self.certificate)
            out["certificate"] = [[list(m), str(y)] for m, y in self.certificate.items()]
        if self.pointwise is not None:
            out["pointwise_certificate"] = [[list(t), str(y)] for t, y in self.pointwise.items()]
        return out


@dataclass
class Prolongation:
    order: int
    degree: int
    components: dict  # eps-monomial -> {shift: P}
    failure: Failure = None
    verified: bool = False

    @property
    def status(self) -> str:
        return "solved" if self.failure is None else self.failure.kind

    def product(self) -> DeformedProduct:
        terms = []
        for mono, comp in sorted(self.components.items()):
            if mono == ZERO_MONO:
                continue
            for w, P in sorted(comp.items()):
                terms.append((TruncatedSeries.monomial(mono, 1, self.order), IndexedCochain(w, P)))
        return DeformedProduct(terms, self.order)

    def corrections(self, mono) -> dict:
        return self.components.get(tuple(mono), {})


def _monomials_of_degree(l: int, support):
    """All eps-monomials of total degree l using only parameters in ``support``."""
    support = sorted(support)
    out = []
    for combo in itertools.combinations_with_replacement(support, l):
        e = [0] * NPARAMS
        for k in combo:
            e[k - 1] += 1
        out.append(tuple(e))
    return sorted(set(out))


def solve_prolongation(first_order, order: int, degree: int = None, shifts=None,
                       extra_degree: int = 2) -> Prolongation:
    """Extend a first-order deformation order by order, modulo eps^order.

    ``first_order`` lists ``(eps-monomial of degree 1, IndexedCochain)``. At each
    eps-monomial m of degree >= 2 the correction phi_m solves
    linearized(phi_m) = -sum_{m1 + m2 = m} defect(phi_m1, phi_m2)
    in the ansatz (shift in ``shifts``, P of degree <= ``degree``). When that fails,
    degrees up to ``degree + extra_degree`` are tried: success there is reported as
    "ansatz-too-small". Otherwise the equation is imposed pointwise with arbitrary
    cochain values; a certificate there makes the failure "inconsistent" (no cochain
    of any form works at this order), its absence leaves it "ansatz-too-small".
    """
    degree = order + 1 if degree is None else degree
    lo, hi = shifts if shifts is not None else (-order - 1, order + 1)
    comps = {ZERO_MONO: {0: BASE.P}}
    support = set()
    for mono, psi in first_order:
        mono = tuple(mono)
        if sum(mono) != 1:
            raise ValueError("first-order terms must carry a degree-one eps-monomial")
        support.add(mono.index(1) + 1)
        comp = comps.setdefault(mono, {})
        comp[psi.w] = comp.get(psi.w, IndexPoly({}, 2)) + psi.P
    for l in range(2, order):
        for m in _monomials_of_degree(l, support):
            rhs = {}
            for m1, phi in list(comps.items()):
                if m1 == ZERO_MONO or sum(m1) >= l:
                    continue
                m2 = _mono_sub(m, m1)
                if min(m2) < 0 or m2 not in comps or m2 == ZERO_MONO:
                    continue
                for W, v in graded_defect(phi, comps[m2]).items():
                    rhs[W] = rhs.get(W, IndexPoly({}, 3)) - v
            sol = {}
            for W, target in sorted(rhs.items()):
                if not target:
                    continue
                if not lo <= W <= hi:
                    fail = Failure("ansatz-too-small", m, W, degree, target)
                    return Prolongation(order, degree, comps, fail)
                P, cert = solve_shift(W, target, degree)
                if P is None:
                    for D2 in range(degree + 1, degree + extra_degree + 1):
                        if solve_shift(W, target, D2)[0] is not None:
                            fail = Failure("ansatz-too-small", m, W, degree, target, solvable_at=D2)
                            return Prolongation(order, degree, comps, fail)
                    pw = pointwise_certificate(W, target)
                    kind = "inconsistent" if pw is not None else "ansatz-too-small"
                    fail = Failure(kind, m, W, degree, target, certificate=cert, pointwise=pw)
                    return Prolongation(order, degree, comps, fail)
                if P:
                    sol[W] = P
            if sol:
                comps[m] = sol
    result = Prolongation(order, degree, comps)
    result.verified = not result.product().symbolic_defect()
    return result


def obstruction_value(eps) -> Fraction:
    """eps1 eps4 + eps2 eps3."""
    e1, e2, e3, e4 = (Fraction(e) for e in eps)
    return e1 * e4 + e2 * e3


def computed_obstruction_value(eps) -> Fraction:
    """eps1 eps4 - eps2 eps3: the order-2 class of Psi_1 is this multiple of one fixed class."""
    e1, e2, e3, e4 = (Fraction(e) for e in eps)
    return e1 * e4 - e2 * e3


def obstruction_sample(eps, degree: int = 4, through: int = 2) -> dict:
    """Try to prolong Psi_1 = sum eps_k psi^k (numeric eps_k) through eps-order ``through``.

    One deformation parameter carries the numeric combination. Unsolvability is
    relative to the ansatz and is reported as such.
    """
    eps = [Fraction(e) for e in eps]
    first = [((1, 0, 0, 0), PSI[k].scaled(e)) for k, e in zip(range(1, 5), eps) if e]
    res = solve_prolongation(first, through + 1, degree)
    verdict = "solvable" if res.failure is None else "unsolvable-within-ansatz"
    return {
        "eps": [str(e) for e in eps],
        "condition": str(obstruction_value(eps)),
        "computed_condition": str(computed_obstruction_value(eps)),
        "verdict": verdict,
        "any_cochain_certificate": res.failure is not None and res.failure.kind == "inconsistent",
        "degree_bound": degree,
        "failure": None if res.failure is None else res.failure.payload(),
        "note": "completeness is relative to the indexed ansatz; unsolvable here does not prove a true obstruction",
    }


# -- operator form ------------------------------------------------------------------------------


def _newton_coefficients(Q: IndexPoly) -> list:
    """Q(J) = sum_s c_s (J)_s for a polynomial in one variable J."""
    deg = max(Q.degree, 0)
    vals = [Q(t) for t in range(deg + 1)]
    coeffs = []
    for s in range(deg + 1):
        coeffs.append(vals[0] / factorial(s))
        vals = [vals[t + 1] - vals[t] for t in range(len(vals) - 1)]
    return coeffs


def operator_form(w: int, P: IndexPoly):
    """Write (w, P) as prefix(a) * (sum_s c_s x^p_s d^s)(b) when P factors that way.

    prefix "[xd,a]" means i x^(i+1) (P = i Q(j)); prefix "d(a)" means (i+1) x^i
    (P = (i+1) Q(j)). Returns ``{"prefix", "terms": [(c_s, x_power, s)]}`` or None.
    """
    one_var = IndexPoly.var(0, 1)
    for prefix, factor, shift in (("[xd,a]", I, -1), ("d(a)", I + 1, 0)):
        if prefix == "[xd,a]":
            Qj = IndexPoly({(e[1],): c for e, c in P.terms.items() if e[0] == 1}, 1)
        else:
            Qj = IndexPoly({(e[1],): c for e, c in P.terms.items() if e[0] == 0}, 1)
        Q2 = Qj.subs([IndexPoly.var(1, 2)])
        if factor * Q2 != P or not P:
            continue
        QJ = Qj.subs([one_var - 1])  # as a polynomial in J = j + 1
        terms = [(c, s + w + shift, s) for s, c in enumerate(_newton_coefficients(QJ)) if c]
        return {"prefix": prefix, "terms": terms}
    return None


def format_operator(form) -> str:
    if form is None:
        return "-"
    parts = []
    for c, xp, s in form["terms"]:
        x = "" if xp == 0 else ("x" if xp == 1 else f"x^{xp}")
        d = "" if s == 0 else ("d" if s == 1 else f"d^{s}")
        mono = x + d or "1"
        parts.append((c < 0, mono if abs(c) == 1 else f"{abs(c)}{mono}"))
    s = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        s += (" - " if neg else " + ") + body
    return f"{form['prefix']}({s})(b)"


def eps3_rows(result: Prolongation) -> dict:
    """Order l -> (sign, row) with correction = sign * [xd,a](sum_s row[s-1] x^(s-1) d^s)(b)."""
    rows = {}
    for mono, comp in sorted(result.components.items()):
        l = sum(mono)
        if l == 0 or set(comp) != {0}:
            continue
        form = operator_form(0, comp[0])
        if form is None or form["prefix"] != "[xd,a]":
            rows[l] = None
            continue
        cs = {s: c for c, _, s in form["terms"]}
        top = max(cs)
        sign = 1 if cs[top] > 0 else -1
        rows[l] = (sign, tuple(sign * cs.get(s, 0) for s in range(1, top + 1)))
    return rows


REFERENCE_EPS3_ROWS = {
    1: (1,),
    2: (1, 1),
    3: (1, 3, 1),
    4: (1, 7, 6, 1),
    5: (1, 63, 25, 10, 1),
}
