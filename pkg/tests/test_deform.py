import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from rsymwitt import deform as df
from rsymwitt.deform import I, J, IndexPoly
from rsymwitt.scalar import TruncatedSeries
from rsymwitt.witt import WittAlgebra, circ

W1 = WittAlgebra.laurent(1)
E_WINDOW = range(-3, 4)
si, sj = sympy.symbols("i j")


def _to_sympy(p: IndexPoly):
    return sum((sympy.Rational(c.numerator, c.denominator) * si ** e[0] * sj ** e[1]
                for e, c in p.terms.items()), sympy.Integer(0))


polys = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)),
                        st.fractions(max_denominator=4).filter(lambda x: abs(x) < 10), max_size=4)


@given(polys, polys)
def test_index_poly_arithmetic_matches_sympy(a, b):
    p, q = IndexPoly(a, 2), IndexPoly(b, 2)
    assert sympy.expand(_to_sympy(p * q) - _to_sympy(p) * _to_sympy(q)) == 0
    assert sympy.expand(_to_sympy(p - q) - (_to_sympy(p) - _to_sympy(q))) == 0
    assert (p * q)(2, -3) == p(2, -3) * q(2, -3)


def test_falling_factorial():
    f = df.falling(J + 1, 3)
    for j in range(-3, 5):
        assert f(0, j) == (j + 1) * j * (j - 1)


def test_base_product_is_circ():
    for i in E_WINDOW:
        for j in E_WINDOW:
            assert df.BASE(W1.e(i), W1.e(j)) == circ(W1.e(i), W1.e(j))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_psi_encodings_match_function_formulas(k):
    for i in E_WINDOW:
        for j in E_WINDOW:
            a, b = W1.e(i), W1.e(j)
            assert df.PSI[k](a, b) == df.psi_from_functions(k, a, b)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_psi_are_cocycles(k):
    prod = df.DeformedProduct([(TruncatedSeries.eps(1, 2), df.PSI[k])], 2)
    assert not prod.symbolic_defect()
    assert not df.linearized(df.PSI[k].w, df.PSI[k].P)


def test_non_cocycle_fails_both_ways():
    prod = df.DeformedProduct([(TruncatedSeries.eps(3, 2), df.PSI[3]),
                               (TruncatedSeries.eps(3, 2), df.IndexedCochain(1, I * I))], 2)
    assert prod.symbolic_defect()
    rng = random.Random(0)
    found = any(prod.rsym_defect(*(W1.e(rng.randint(-3, 3)) for _ in range(3))) for _ in range(30))
    assert found


def test_osborn_and_eps4_products_are_right_symmetric():
    assert not df.osborn_product(3).symbolic_defect()
    assert not df.osborn_product(5).symbolic_defect()
    assert not df.eps4_product(5).symbolic_defect()


def test_eps3_solver_matches_closed_form():
    res = df.solve_prolongation([(df.eps_monomial(3), df.PSI[3])], 5)
    assert res.status == "solved" and res.verified
    prod = res.product()
    for i in E_WINDOW:
        for j in E_WINDOW:
            assert prod(W1.e(i), W1.e(j)) == df.eps3_closed_form(W1.e(i), W1.e(j), 5)


def test_eps3_rows_are_stirling_numbers():
    res = df.solve_prolongation([(df.eps_monomial(3), df.PSI[3])], 6)
    rows = df.eps3_rows(res)
    for l in range(1, 6):
        sign, row = rows[l]
        assert sign == (-1) ** l
        assert list(row) == [sympy.functions.combinatorial.numbers.stirling(l, s) for s in range(1, l + 1)]


def test_eps4_solver_matches_closed_form():
    res = df.solve_prolongation([(df.eps_monomial(4), df.PSI[4])], 5)
    assert res.components == df.eps4_product(5).graded()
    assert df.format_operator(df.operator_form(-2, (I + 1) * df.falling(J + 1, 2))) == "d(a)(d^2)(b)"


def test_osborn_needs_no_corrections():
    res = df.solve_prolongation([(df.eps_monomial(1), df.PSI[1]), (df.eps_monomial(2), df.PSI[2])], 4)
    assert res.status == "solved"
    assert all(sum(m) <= 1 for m in res.components)


def _combined(eps):
    return [((1, 0, 0, 0), df.PSI[k].scaled(Fraction(e))) for k, e in zip(range(1, 5), eps) if e]


@pytest.mark.parametrize("eps", [(1, 1, 1, 1), (1, 2, 2, 4), (0, 0, 1, 1)])
def test_solvable_points_give_right_symmetric_products(eps):
    res = df.solve_prolongation(_combined(eps), 3, 4)
    assert res.status == "solved"
    prod = res.product()
    rng = random.Random(1)
    for _ in range(25):
        a, b, c = (W1.e(rng.randint(-3, 3)) for _ in range(3))
        assert not prod.rsym_defect(a, b, c)


@pytest.mark.parametrize("eps", [(1, 0, 0, 1), (0, 1, 1, 0), (1, 1, -1, 1)])
def test_unsolvable_points_carry_checked_certificates(eps):
    res = df.solve_prolongation(_combined(eps), 3, 4)
    f = res.failure
    assert f is not None and f.kind == "inconsistent"
    assert df.check_pointwise_certificate(f.shift, f.rhs, f.pointwise)


def test_obstruction_tracks_the_computed_condition():
    for eps in [(1, 0, 0, 0), (1, 1, -1, 1), (1, 1, 1, 1), (1, 0, 0, 1), (2, 3, -1, Fraction(3, 2))]:
        res = df.obstruction_sample(eps)
        solvable = res["verdict"] == "solvable"
        assert solvable == (df.computed_obstruction_value(eps) == 0)


def test_solve_shift_certificate():
    target = df.linearized(0, I * J * J)
    P, cert = df.solve_shift(0, target, 3)
    assert cert is None and not df.linearized(0, P) - target
    P, cert = df.solve_shift(0, target, 1)
    assert P is None and cert
