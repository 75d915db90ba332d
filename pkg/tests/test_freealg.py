import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rsymwitt import freealg as fa
from rsymwitt.exponent import unit
from rsymwitt.witt import WittAlgebra, circ

seeds = st.integers(0, 10**6)
ALGEBRAS = [WittAlgebra.laurent(1), WittAlgebra.laurent(2), WittAlgebra.poly(2), WittAlgebra.divpow(5, (1, 1))]


def _basis_args(alg, rng, k, window=None):
    window = window or alg.default_window()
    return [alg.basis(*rng.choice(window)) for _ in range(k)]


def test_signed_permutations():
    perms = list(fa.signed_permutations(4))
    assert len(perms) == 24
    assert [p for p, _ in perms] == sorted(p for p, _ in perms)
    for p, s in perms:
        assert s == fa.perm_sign(p)


def test_standard_polynomial_shape():
    s = fa.standard_rsym(2)
    assert s.nvars == 3 and s.degree == 3 and s.is_multilinear()
    assert s == fa.parse_polynomial("t1*(t2*t3) - t2*(t1*t3)", 3)


def test_tau_convention():
    assert fa.tau(1, 2) == (3, 2, 1)
    assert len(fa.tau_family(2)) == 3


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(ALGEBRAS), seeds, st.integers(-3, 3))
def test_multilinearity(alg, seed, lam):
    rng = random.Random(seed)
    f = fa.standard_rsym(2, alg.field)
    args = [alg.random_element(rng) for _ in range(3)]
    slot = rng.randrange(3)
    other = alg.random_element(rng)
    mixed = list(args)
    mixed[slot] = args[slot] + other * lam
    replaced = list(args)
    replaced[slot] = other
    assert fa.eval_left(f, mixed) == fa.eval_left(f, args) + fa.eval_left(f, replaced) * lam


@given(st.permutations([1, 2, 3, 4]))
def test_permuting_the_arguments_of_the_standard_polynomial(images):
    s = fa.standard_rsym(4)
    sigma = tuple(images) + (5,)
    assert fa.permute_polynomial(s, sigma) == s * fa.perm_sign([i - 1 for i in images])


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_permuted_identity_is_identity(seed):
    rng = random.Random(seed)
    W = WittAlgebra.laurent(1)
    sigma = list(range(1, 4))
    rng.shuffle(sigma)
    f = fa.permute_polynomial(fa.standard_rsym(2), tuple(sigma))
    assert fa.check_identity(f, W, samples=50, seed=seed).holds


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(ALGEBRAS[1:]), seeds, st.integers(2, 4))
def test_s_k_r_skew_symmetric(alg, seed, k):
    rng = random.Random(seed)
    args = _basis_args(alg, rng, k)
    i, j = rng.sample(range(k), 2)
    swapped = list(args)
    swapped[i], swapped[j] = args[j], args[i]
    r = rng.randint(1, alg.n)
    assert fa.s_k_r(k, r, swapped) == -fa.s_k_r(k, r, args)


def test_s_k_r_vanishes_on_constant_fields():
    W = WittAlgebra.poly(2)
    window = W.basis_degree(1)
    for k in (2, 3):
        for args in itertools.product(window, repeat=k - 1):
            for pos in range(k):
                for i in (1, 2):
                    full = [W.basis(*a) for a in args]
                    full.insert(pos, W.d(i))
                    assert not fa.s_k_r(k, 1, full) and not fa.s_k_r(k, 2, full)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_s_k_r_leibniz_in_one_slot(seed):
    rng = random.Random(seed)
    W = WittAlgebra.laurent(2)
    k = rng.randint(2, 4)
    args = _basis_args(W, rng, k)
    slot = rng.randrange(k)
    i = rng.randint(1, 2)
    u = tuple(rng.randint(-2, 2) for _ in range(2))
    v = tuple(rng.randint(-2, 2) for _ in range(2))
    r = rng.randint(1, 2)

    def with_slot(alpha):
        out = list(args)
        out[slot] = W.basis(alpha, i)
        return fa.s_k_r(k, r, out)

    uv = tuple(a + b for a, b in zip(u, v))
    rhs = with_slot(u).times_function({v: 1}) + with_slot(v).times_function({u: 1})
    assert with_slot(uv) == rhs


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_bridge_to_s_k_r(k):
    # s_k(a_1..a_k, u d_r) = (-1)^(k(k-1)/2) u s_{k,r}(a_1..a_k)
    W = WittAlgebra.laurent(2)
    rng = random.Random(k)
    sign = (-1) ** (k * (k - 1) // 2)
    s = fa.standard_rsym(k)
    for _ in range(15):
        args = _basis_args(W, rng, k)
        u = tuple(rng.randint(-2, 2) for _ in range(2))
        r = rng.randint(1, 2)
        lhs = fa.eval_left(s, args + [W.basis(u, r)])
        assert lhs == fa.s_k_r(k, r, args).times_function({u: 1}) * sign


def test_standard_identity_below_degree_fails():
    for n in (1, 2):
        W = WittAlgebra.poly(n)
        v = fa.check_identity(fa.standard_rsym(2 * n - 1), W, samples=300, seed=1)
        assert not v.holds and v.value


def test_lower_bound_witness_single_ordering():
    W = WittAlgebra.poly(2)
    a = fa.lower_bound_witness(W, 4)
    assert [str(x) for x in a] == ["d1", "x1 d1", "x1 d2", "x2 d2"]
    nonzero = []
    for perm in itertools.permutations(range(4)):
        v = a[perm[-1]]
        for t in reversed(perm[:-1]):
            v = circ(a[t], v)
        if v:
            nonzero.append((perm, v))
    assert len(nonzero) == 1
    perm, v = nonzero[0]
    assert perm == (3, 2, 1, 0) and v == W.d(2)


@given(seeds)
def test_polynomial_text_round_trip(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 4)
    words = rng.sample(fa.multilinear_monomials(k), min(3, len(fa.multilinear_monomials(k))))
    f = fa.LeftPolynomial({w: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for w in words}, k)
    assert fa.parse_polynomial(fa.format_polynomial(f), k) == f


def test_parse_polynomial_errors():
    with pytest.raises(ValueError):
        fa.parse_polynomial("t1*(t2", 2)
    with pytest.raises(ValueError):
        fa.parse_polynomial("t3*t1", 2)


def test_mixed_and_novikov():
    for alg in (WittAlgebra.laurent(1), WittAlgebra.poly(2)):
        for name, fn in fa.MIXED_IDENTITIES.items():
            assert fa.check_trilinear(fn, alg, 100, 3, general=5).holds, name
    assert fa.check_trilinear(fa.novikov_defect, WittAlgebra.laurent(1), 100, 3).holds
    W2 = WittAlgebra.poly(2)
    a, b, c = fa.novikov_witness(W2)
    assert fa.novikov_defect(a, b, c) == W2.basis(unit(2, 1), 1)


def test_right_identities_degree_bounds():
    W1 = WittAlgebra.laurent(1)
    assert fa.check_right_words(fa.right_standard_words(3), W1, samples=200).holds
    assert not fa.check_right_words(fa.right_standard_words(2), W1, samples=200).holds
    assert not fa.check_right_words(fa.right_standard_words(6), WittAlgebra.poly(2), samples=200).holds
    assert fa.check_right_words(fa.operator_words(4), WittAlgebra.poly(1), samples=50).holds
