from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from rsymwitt.linalg import Echelon, in_span, nullspace, rank, solve
from rsymwitt.scalar import GF, QQ

matrices = st.integers(1, 6).flatmap(
    lambda ncols: st.lists(st.lists(st.integers(-3, 3), min_size=ncols, max_size=ncols), min_size=1, max_size=7)
)


def _sparse(rows):
    return [{c: v for c, v in enumerate(r) if v} for r in rows]


@given(matrices)
def test_rank_matches_sympy(rows):
    assert rank(_sparse(rows)) == sympy.Matrix(rows).rank()


@given(matrices)
def test_nullspace_is_kernel(rows):
    ncols = len(rows[0])
    ker = nullspace(_sparse(rows), ncols)
    assert len(ker) + rank(_sparse(rows)) == ncols
    for v in ker:
        for r in rows:
            assert sum(Fraction(r[c]) * v.get(c, 0) for c in range(ncols)) == 0


@settings(max_examples=50)
@given(matrices, st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_matches_sympy(rows, p):
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.domains import GF as SGF

    dm = DomainMatrix([[SGF(p)(x) for x in r] for r in rows], (len(rows), len(rows[0])), SGF(p))
    assert rank(_sparse(rows), GF(p)) == dm.rank()


@given(matrices, st.lists(st.integers(-3, 3), min_size=7, max_size=7))
def test_solve_or_certificate(rows, rhs):
    ncols = len(rows[0])
    rhs = rhs[: len(rows)]
    x, cert = solve(_sparse(rows), rhs, ncols)
    if x is not None:
        for r, b in zip(rows, rhs):
            assert sum(r[c] * x.get(c, 0) for c in range(ncols)) == b
    else:
        for c in range(ncols):
            assert sum(cert.get(k, 0) * rows[k][c] for k in range(len(rows))) == 0
        assert sum(cert.get(k, 0) * rhs[k] for k in range(len(rows))) != 0


def test_in_span_and_echelon():
    rows = [{0: 1, 1: 2}, {1: 1, 2: 1}]
    assert in_span({0: 1, 1: 3, 2: 1}, rows)
    assert not in_span({2: 1}, rows)
    e = Echelon(QQ)
    assert e.add({0: 2}) and not e.add({0: 4})
    assert e.rank == 1
