"""Adomian polynomials of the quadratic nonlinearities.

Oracle: the coefficient of eps**n in N(sum eps**k u_k), computed by
expanding the nonlinearity with a symbolic series in eps.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracburgers import expr as ex
from fracburgers.adomian import adomian_A, adomian_B, adomian_C
from fracburgers.errors import MissingComponent
from helpers import max_rel_diff, real_expressions


def _eps_coefficient(u, v, n, kind):
    """Brute-force double sum over all index pairs with i + j == n."""
    total = ex.ZERO
    for i in range(len(u)):
        for j in range(len(v)):
            if i + j != n:
                continue
            if kind == "uux":
                total = total + u[i] * ex.differentiate(u[j], "X")
            else:
                total = total + u[i] * v[j]
    return total


def test_A2_by_hand():
    u = [ex.sin_x(1), ex.X * ex.T, ex.exp_xt(1, 0)]
    want = (
        u[0] * ex.differentiate(u[2], "X")
        + u[1] * ex.differentiate(u[1], "X")
        + u[2] * ex.differentiate(u[0], "X")
    )
    assert adomian_A(u, 2) == want


def test_A0_is_product():
    u = [ex.sin_x(1)]
    assert adomian_A(u, 0) == ex.sin_x(1) * ex.cos_x(1)


def test_B_matches_A():
    v = [ex.X, ex.T, ex.xpow_n(2)]
    assert adomian_B(v, 2) == adomian_A(v, 2)


def test_missing_component():
    with pytest.raises(MissingComponent):
        adomian_A([ex.X], 1)
    with pytest.raises(MissingComponent):
        adomian_C([ex.X, ex.T], [ex.X], 1)
    with pytest.raises(MissingComponent):
        adomian_B([ex.X], -1)


@settings(max_examples=40, deadline=None)
@given(st.lists(real_expressions, min_size=1, max_size=4), st.data())
def test_A_matches_series_expansion(u, data):
    n = data.draw(st.integers(0, len(u) - 1))
    assert max_rel_diff(adomian_A(u, n), _eps_coefficient(u, u, n, "uux")) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.lists(real_expressions, min_size=3, max_size=3), st.lists(real_expressions, min_size=3, max_size=3))
def test_C_is_symmetric_convolution(u, v):
    for n in range(3):
        assert max_rel_diff(adomian_C(u, v, n), _eps_coefficient(u, v, n, "uv")) < 1e-12
        assert max_rel_diff(adomian_C(u, v, n), adomian_C(v, u, n)) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.lists(real_expressions, min_size=3, max_size=3))
def test_partial_sums_of_A_reproduce_product(u):
    # sum_{n<=2} A_n = U U_X minus the cross terms of total index > 2
    U = u[0] + u[1] + u[2]
    full = U * ex.differentiate(U, "X")
    high = sum(
        (u[i] * ex.differentiate(u[j], "X") for i in range(3) for j in range(3) if i + j > 2),
        ex.ZERO,
    )
    got = adomian_A(u, 0) + adomian_A(u, 1) + adomian_A(u, 2)
    assert max_rel_diff(got + high, full) < 1e-11


@settings(max_examples=30, deadline=None)
@given(st.lists(real_expressions, min_size=3, max_size=3))
def test_equal_inputs_are_symmetric(u):
    for n in range(3):
        assert adomian_A(u, n) == adomian_B(u, n)
        want = sum((u[k] * u[n - k] for k in range(n + 1)), ex.ZERO)
        assert max_rel_diff(adomian_C(u, u, n), want) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.lists(real_expressions, min_size=3, max_size=3), st.integers(0, 2))
def test_scaling_one_slot(u, j):
    # A_n is bilinear: scaling u_j by c multiplies the products holding one copy
    # of index j by c and the (j, j) product by c**2
    c = 3.0
    scaled = list(u)
    scaled[j] = c * u[j]
    for n in range(3):
        want = ex.ZERO
        for k in range(n + 1):
            factor = (c if k == j else 1.0) * (c if n - k == j else 1.0)
            want = want + factor * (u[k] * ex.differentiate(u[n - k], "X"))
        assert max_rel_diff(adomian_A(scaled, n), want) < 1e-12
