import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rsymwitt.scalar import (
    GF,
    QQ,
    SeriesRing,
    TruncatedSeries,
    binomial,
    is_prime,
    lucas_binomial,
    parse_field,
)

PRIMES = [2, 3, 5, 7, 11, 13]
fractions = st.fractions(max_denominator=20).filter(lambda x: abs(x) < 100)


@given(st.sampled_from(PRIMES), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_fp_field_axioms(p, a, b, c):
    F = GF(p)
    x, y, z = F(a), F(b), F(c)
    assert (x + y) * z == x * z + y * z
    assert x - x == F.zero
    if x:
        assert x * x.inverse() == F.one
        assert (y / x) * x == y


@given(st.sampled_from(PRIMES), st.integers(0, 400), st.integers(0, 400))
def test_lucas_matches_comb_mod_p(p, n, k):
    assert lucas_binomial(n, k, p) == math.comb(n, k) % p


def test_fp_rejects_bad_denominator():
    F = GF(5)
    assert F(Fraction(1, 2)) == F(3)
    with pytest.raises(ZeroDivisionError):
        F(Fraction(1, 5))


def test_is_prime_small():
    assert [q for q in range(30) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_parse_field():
    assert parse_field("rationals") == QQ
    assert parse_field("fp:7") == GF(7)
    with pytest.raises(ValueError):
        parse_field("fp:8")


def test_multi_index_binomial():
    assert binomial((2, 1), (1, 3)) == 3 * 4
    assert binomial((3,), (4,), GF(7)) == GF(7)(0)
    assert binomial((1,), (1,), GF(7)) == GF(7)(2)
    with pytest.raises(ValueError):
        binomial((1,), (-1,))


@given(st.lists(fractions, min_size=1, max_size=5), st.lists(fractions, min_size=1, max_size=5))
def test_series_ring_laws(xs, ys):
    R = SeriesRing(4)
    a = sum((R.eps(1, k) * c for k, c in enumerate(xs)), R.zero)
    b = sum((R.eps(3, k) * c for k, c in enumerate(ys)), R.zero)
    assert a * b == b * a
    assert (a + b) * a == a * a + b * a
    if a.constant_term():
        assert a * a.inverse() == R.one


def test_truncation_drops_high_orders():
    e = TruncatedSeries.eps(2, 3)
    assert not e * e * e
    assert (e * e).coefficient((0, 2, 0, 0)) == 1


def test_geometric_series():
    R = SeriesRing(5)
    e = R.eps(3)
    inv = (R.one + e * 2).inverse()
    for k in range(5):
        assert inv.coefficient((0, 0, k, 0)) == (-2) ** k
