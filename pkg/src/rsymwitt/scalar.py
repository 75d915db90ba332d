"""Exact coefficient arithmetic.

Three coefficient kinds are supported:

* rationals, backed by :class:`fractions.Fraction` (field object :data:`QQ`);
* prime fields, :class:`PrimeField` with elements :class:`FpElement`;
* truncated power series in the four deformation parameters, :class:`TruncatedSeries`.

All values are immutable and canonical, so equality is structural.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

Rational = Fraction

__all__ = [
    "QQ",
    "GF",
    "FpElement",
    "PrimeField",
    "Rational",
    "RationalField",
    "SeriesRing",
    "TruncatedSeries",
    "binomial",
    "is_prime",
    "lucas_binomial",
    "parse_field",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class RationalField:
    """The field of rational numbers; elements are ``Fraction`` instances."""

    characteristic = 0
    name = "QQ"

    def __call__(self, x) -> Fraction:
        if isinstance(x, FpElement):
            raise TypeError("cannot coerce a prime-field element into QQ")
        return Fraction(x)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def parse(self, text: str) -> Fraction:
        return Fraction(text.strip())

    def format(self, x) -> str:
        x = Fraction(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


class FpElement:
    """A residue class modulo a prime ``p``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "value", int(value) % p)

    def __setattr__(self, name, value):
        raise AttributeError("FpElement is immutable")

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise TypeError(f"prime-field mismatch: F_{self.p} vs F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError(f"{other} has no image in F_{self.p}")
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "FpElement":
        if self.value == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return FpElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return FpElement(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o, self.p) / self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FpElement(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return (other - self.value) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpElement({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class PrimeField:
    """The prime field F_p."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"F{p}"

    def __call__(self, x) -> FpElement:
        if isinstance(x, FpElement):
            if x.p != self.p:
                raise TypeError(f"prime-field mismatch: F_{self.p} vs F_{x.p}")
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
            return FpElement(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return FpElement(int(x), self.p)

    @property
    def zero(self) -> FpElement:
        return FpElement(0, self.p)

    @property
    def one(self) -> FpElement:
        return FpElement(1, self.p)

    def parse(self, text: str) -> FpElement:
        return self(Fraction(text.strip()))

    def format(self, x) -> str:
        return str(self(x).value)

    def elements(self):
        return [FpElement(v, self.p) for v in range(self.p)]

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str):
    """Parse ``rationals`` / ``QQ`` or ``fp:<p>``."""
    t = text.strip().lower()
    if t in ("rationals", "qq", "q"):
        return QQ
    if t.startswith("fp:"):
        return GF(int(t[3:]))
    raise ValueError(f"unknown field {text!r}; expected 'rationals' or 'fp:<p>'")


def lucas_binomial(n: int, k: int, p: int) -> int:
    """C(n, k) mod p, digit by digit in base p."""
    if k < 0 or n < 0 or k > n:
        return 0
    result = 1
    while n or k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        result = result * math.comb(nd, kd) % p
        n //= p
        k //= p
    return result


def binomial(a, b, field=QQ):
    """Multi-index binomial ((a+b) choose a) = prod_i C(a_i + b_i, a_i) in ``field``."""
    if len(a) != len(b):
        raise ValueError("multi-index length mismatch")
    if any(x < 0 for x in a) or any(x < 0 for x in b):
        raise ValueError(f"negative component in {tuple(a)} / {tuple(b)}")
    if isinstance(field, PrimeField):
        p = field.p
        r = 1
        for x, y in zip(a, b):
            r = r * lucas_binomial(x + y, x, p) % p
            if r == 0:
                break
        return FpElement(r, p)
    r = 1
    for x, y in zip(a, b):
        r *= math.comb(x + y, x)
    return field(r)


# -- truncated power series in eps1..eps4 ------------------------------------

NPARAMS = 4
_PARAM_NAMES = ("e1", "e2", "e3", "e4")


class TruncatedSeries:
    """A power series in eps1..eps4 with rational coefficients, truncated below total degree ``order``.

    Coefficients are kept in a sparse dict keyed by 4-tuples of exponents.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs=None, order: int = 1):
        if order < 1:
            raise ValueError("truncation order must be positive")
        clean = {}
        if coeffs:
            for e, c in coeffs.items():
                e = tuple(e)
                if len(e) != NPARAMS:
                    raise ValueError("exponent tuples must have length 4")
                if sum(e) >= order:
                    continue
                c = Fraction(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @classmethod
    def constant(cls, c, order: int) -> "TruncatedSeries":
        return cls({(0, 0, 0, 0): c}, order)

    @classmethod
    def eps(cls, k: int, order: int, power: int = 1) -> "TruncatedSeries":
        """The monomial eps_k**power (k in 1..4)."""
        if not 1 <= k <= NPARAMS:
            raise ValueError("parameter index must be in 1..4")
        e = [0] * NPARAMS
        e[k - 1] = power
        return cls({tuple(e): 1}, order)

    @classmethod
    def monomial(cls, exps, c=1, order: int = 1) -> "TruncatedSeries":
        return cls({tuple(exps): c}, order)

    def _lift(self, other):
        if isinstance(other, TruncatedSeries):
            if other.order != self.order:
                raise TypeError(f"truncation mismatch: {self.order} vs {other.order}")
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        out = dict(self.coeffs)
        for e, c in o.coeffs.items():
            out[e] = out.get(e, 0) + c
        return TruncatedSeries(out, self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries({e: -c for e, c in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries({e: c * other for e, c in self.coeffs.items()}, self.order)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        N = self.order
        out = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for e2, c2 in o.coeffs.items():
                if d1 + sum(e2) >= N:
                    continue
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                out[e] = out.get(e, 0) + c1 * c2
        return TruncatedSeries(out, N)

    __rmul__ = __mul__

    def constant_term(self) -> Fraction:
        return self.coeffs.get((0, 0, 0, 0), Fraction(0))

    def inverse(self) -> "TruncatedSeries":
        c0 = self.constant_term()
        if not c0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        # 1/(c0 (1 + t)) = (1/c0) * sum (-t)^k, t nilpotent of index < order
        t = self * (1 / c0) - 1
        term = TruncatedSeries.constant(1, self.order)
        acc = term
        for _ in range(1, self.order):
            term = term * (-t)
            acc = acc + term
        return acc * (1 / c0)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        acc = TruncatedSeries.constant(1, self.order)
        for _ in range(k):
            acc = acc * self
        return acc

    def coefficient(self, exps) -> Fraction:
        return self.coeffs.get(tuple(exps), Fraction(0))

    def homogeneous_part(self, degree: int) -> dict:
        return {e: c for e, c in self.coeffs.items() if sum(e) == degree}

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == TruncatedSeries.constant(other, self.order)
        return NotImplemented

    def __hash__(self):
        return hash((self.order, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"TruncatedSeries({self}, order={self.order})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, key=lambda e: (sum(e), tuple(-x for x in e))):
            c = self.coeffs[e]
            mono = "*".join(
                name if k == 1 else f"{name}^{k}" for name, k in zip(_PARAM_NAMES, e) if k
            )
            cs = QQ.format(abs(c))
            body = cs if not mono else (mono if cs == "1" else f"{cs}*{mono}")
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


class SeriesRing:
    """Coefficient ring of :class:`TruncatedSeries` with a fixed truncation order."""

    characteristic = 0

    def __init__(self, order: int):
        if order < 1:
            raise ValueError("truncation order must be positive")
        self.order = order

    def __call__(self, x) -> TruncatedSeries:
        if isinstance(x, TruncatedSeries):
            if x.order != self.order:
                raise TypeError(f"truncation mismatch: {x.order} vs {self.order}")
            return x
        return TruncatedSeries.constant(x, self.order)

    @property
    def zero(self) -> TruncatedSeries:
        return TruncatedSeries({}, self.order)

    @property
    def one(self) -> TruncatedSeries:
        return TruncatedSeries.constant(1, self.order)

    def eps(self, k: int, power: int = 1) -> TruncatedSeries:
        return TruncatedSeries.eps(k, self.order, power)

    def format(self, x) -> str:
        return str(x)

    def __repr__(self):
        return f"SeriesRing({self.order})"

    def __eq__(self, other):
        return isinstance(other, SeriesRing) and other.order == self.order

    def __hash__(self):
        return hash(("series", self.order))
