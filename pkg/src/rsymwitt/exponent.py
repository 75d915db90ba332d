"""Multi-indices and the three exponent domains.

``laurent``  all integer n-tuples (Laurent polynomials)
``poly``     non-negative n-tuples (polynomials)
``divpow``   the box 0 <= a_i < p**m_i (truncated divided powers over F_p)

Multi-indices are plain tuples of ints. Directions are 1-based, as in d1..dn.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .scalar import QQ, GF, PrimeField, binomial, is_prime

LAURENT = "laurent"
POLY = "poly"
DIVPOW = "divpow"
KINDS = (LAURENT, POLY, DIVPOW)


@dataclass(frozen=True)
class ExponentDomain:
    kind: str
    n: int
    m: tuple = ()
    p: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown exponent domain {self.kind!r}")
        if self.n < 1:
            raise ValueError("rank must be positive")
        if self.kind == DIVPOW:
            object.__setattr__(self, "m", tuple(self.m))
            if len(self.m) != self.n:
                raise ValueError(f"m-vector {self.m} does not have length {self.n}")
            if any(mi < 1 for mi in self.m):
                raise ValueError("m entries must be >= 1")
            if not is_prime(self.p):
                raise ValueError(f"divided powers need a prime p, got {self.p}")
        elif self.m or self.p:
            raise ValueError("m and p only apply to divided powers")

    @classmethod
    def laurent(cls, n: int) -> "ExponentDomain":
        return cls(LAURENT, n)

    @classmethod
    def poly(cls, n: int) -> "ExponentDomain":
        return cls(POLY, n)

    @classmethod
    def divpow(cls, p: int, m) -> "ExponentDomain":
        m = tuple(m)
        return cls(DIVPOW, len(m), m, p)

    @property
    def bounds(self) -> tuple:
        """Exclusive upper bounds p**m_i (divided powers only)."""
        return tuple(self.p**mi for mi in self.m)

    @property
    def finite(self) -> bool:
        return self.kind == DIVPOW

    def natural_field(self):
        return GF(self.p) if self.kind == DIVPOW else QQ

    def __str__(self):
        if self.kind == DIVPOW:
            return f"divpow(n={self.n}, p={self.p}, m={list(self.m)})"
        return f"{self.kind}(n={self.n})"


def _check_rank(domain: ExponentDomain, alpha):
    if len(alpha) != domain.n:
        raise ValueError(f"multi-index {tuple(alpha)} has rank {len(alpha)}, expected {domain.n}")


def contains(domain: ExponentDomain, alpha) -> bool:
    _check_rank(domain, alpha)
    if domain.kind == LAURENT:
        return True
    if domain.kind == POLY:
        return all(a >= 0 for a in alpha)
    return all(0 <= a < b for a, b in zip(alpha, domain.bounds))


def _require(domain, alpha):
    if not contains(domain, alpha):
        raise ValueError(f"{tuple(alpha)} is outside {domain}")


def unit(n: int, i: int) -> tuple:
    """The multi-index with a single 1 in direction ``i`` (1-based)."""
    e = [0] * n
    e[i - 1] = 1
    return tuple(e)


def add(a, b) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def degree(alpha) -> int:
    return sum(alpha)


def monomial_product_coeff(domain: ExponentDomain, alpha, beta, field=None):
    """x^a * x^b as ``(coeff, exponent)``, or ``None`` when the product vanishes."""
    _require(domain, alpha)
    _require(domain, beta)
    gamma = add(alpha, beta)
    if domain.kind != DIVPOW:
        f = field or QQ
        return f(1), gamma
    f = field or GF(domain.p)
    if not contains(domain, gamma):
        return None
    c = binomial(alpha, beta, f)
    if not c:
        return None
    return c, gamma


def derivation_coeff(domain: ExponentDomain, alpha, i: int, field=None):
    """d_i(x^a) as ``(coeff, exponent)``, or ``None`` when it vanishes."""
    if not 1 <= i <= domain.n:
        raise ValueError(f"direction {i} out of range 1..{domain.n}")
    _require(domain, alpha)
    a = alpha[i - 1]
    lowered = sub(alpha, unit(domain.n, i))
    if domain.kind == DIVPOW:
        if a == 0:
            return None
        return (field or GF(domain.p))(1), lowered
    f = field or QQ
    c = f(a)
    if not c:
        return None
    return c, lowered


def box(domain: ExponentDomain, lo: int, hi: int):
    """All exponents of the domain with every entry in [lo, hi], lexicographic."""
    from itertools import product

    out = []
    for alpha in product(range(lo, hi + 1), repeat=domain.n):
        if contains(domain, alpha):
            out.append(alpha)
    return out


def total_degree_at_most(domain: ExponentDomain, k: int):
    """Non-negative exponents of the domain with |a| <= k."""
    return [a for a in box(domain, 0, k) if sum(a) <= k]


def all_exponents(domain: ExponentDomain):
    if not domain.finite:
        raise ValueError(f"{domain} is infinite")
    from itertools import product

    return [tuple(a) for a in product(*(range(b) for b in domain.bounds))]


# -- textual syntax -----------------------------------------------------------

_FACTOR = re.compile(r"x(\d+)(?:\^(\(\d+\)|-?\d+))?$")


def format_monomial(alpha, divided: bool = False) -> str:
    """``x1^-2*x2^3``; divided powers print as ``x1^(3)``; the unit monomial is ``1``."""
    parts = []
    for idx, a in enumerate(alpha, start=1):
        if a == 0:
            continue
        if divided:
            parts.append(f"x{idx}^({a})")
        elif a == 1:
            parts.append(f"x{idx}")
        else:
            parts.append(f"x{idx}^{a}")
    return "*".join(parts) if parts else "1"


def parse_monomial(text: str, n: int, divided: bool = False) -> tuple:
    text = text.strip()
    alpha = [0] * n
    if text == "1":
        return tuple(alpha)
    seen = set()
    for factor in text.split("*"):
        mt = _FACTOR.match(factor.strip())
        if not mt:
            raise ValueError(f"bad monomial factor {factor!r}")
        idx = int(mt.group(1))
        if not 1 <= idx <= n:
            raise ValueError(f"variable x{idx} out of range for rank {n}")
        if idx in seen:
            raise ValueError(f"variable x{idx} repeated in {text!r}")
        seen.add(idx)
        raw = mt.group(2)
        if raw is None:
            exp = 1
        elif raw.startswith("("):
            if not divided:
                raise ValueError("divided-power exponent in an ordinary monomial")
            exp = int(raw[1:-1])
        else:
            if divided:
                raise ValueError("ordinary exponent in a divided-power monomial")
            exp = int(raw)
        alpha[idx - 1] = exp
    return tuple(alpha)


def is_prime_field(field) -> bool:
    return isinstance(field, PrimeField)
