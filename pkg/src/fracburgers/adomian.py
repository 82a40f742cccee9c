"""Adomian polynomials for the quadratic nonlinearities u*u_X, v*v_X and u*v.

For quadratic terms the Adomian polynomials reduce to Cauchy convolutions
of the series components, e.g. ``A_2 = u0*u2_X + u1*u1_X + u2*u0_X``.
"""

from __future__ import annotations

from typing import Sequence

from . import expr as ex
from .errors import MissingComponent
from .expr import Expression


def _require(components: Sequence[Expression], n: int, name: str):
    if n < 0:
        raise MissingComponent(f"index {n} is negative")
    if len(components) < n + 1:
        raise MissingComponent(f"{name} has {len(components)} components, need {n + 1}")


def _self_convolution(u: Sequence[Expression], n: int, name: str) -> Expression:
    _require(u, n, name)
    terms = []
    for k in range(n + 1):
        terms.extend(ex.multiply(u[k], ex.differentiate(u[n - k], "X")).terms)
    return Expression(terms)


def adomian_A(u: Sequence[Expression], n: int) -> Expression:
    """n-th polynomial of ``u * u_X``."""
    return _self_convolution(u, n, "u")


def adomian_B(v: Sequence[Expression], n: int) -> Expression:
    """n-th polynomial of ``v * v_X``."""
    return _self_convolution(v, n, "v")


def adomian_C(u: Sequence[Expression], v: Sequence[Expression], n: int) -> Expression:
    """n-th polynomial of ``u * v``."""
    _require(u, n, "u")
    _require(v, n, "v")
    terms = []
    for k in range(n + 1):
        terms.extend(ex.multiply(u[k], v[n - k]).terms)
    return Expression(terms)
