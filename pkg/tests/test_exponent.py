import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from rsymwitt import exponent as ex


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4))
def test_monomial_text_round_trip(alpha):
    alpha = tuple(alpha)
    assert ex.parse_monomial(ex.format_monomial(alpha), len(alpha)) == alpha


@given(st.lists(st.integers(0, 6), min_size=1, max_size=3))
def test_divided_monomial_text_round_trip(alpha):
    alpha = tuple(alpha)
    assert ex.parse_monomial(ex.format_monomial(alpha, True), len(alpha), True) == alpha


def test_domains():
    d = ex.ExponentDomain.divpow(3, (1, 2))
    assert d.bounds == (3, 9) and d.finite
    assert len(list(ex.all_exponents(d))) == 27
    assert ex.contains(d, (2, 8)) and not ex.contains(d, (3, 0))
    assert not ex.contains(ex.ExponentDomain.poly(2), (-1, 0))
    with pytest.raises(ValueError):
        ex.ExponentDomain.divpow(4, (1,))
    with pytest.raises(ValueError):
        ex.ExponentDomain("poly", 2, (1, 1), 3)


def test_parse_rejects_mixed_notation():
    with pytest.raises(ValueError):
        ex.parse_monomial("x1^(2)", 1)
    with pytest.raises(ValueError):
        ex.parse_monomial("x1^2", 1, divided=True)
    with pytest.raises(ValueError):
        ex.parse_monomial("x1*x1", 1)


def test_python_fallback_selected_without_extension():
    code = (
        "import sys; sys.modules['rsymwitt._kernels'] = None\n"
        "from rsymwitt import kernels, idsearch\n"
        "from rsymwitt.witt import WittAlgebra\n"
        "assert kernels.available_backends() == ['python'] and kernels.backend() == 'python'\n"
        "assert idsearch.search(WittAlgebra.laurent(1), 3).dimension == 3\n"
    )
    subprocess.run([sys.executable, "-c", code], check=True)
