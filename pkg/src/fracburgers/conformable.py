"""Conformable derivative machinery and the stretched-coordinate map.

With ``X = x**p / p`` and ``T = t**q / q`` the conformable partial
derivatives become ordinary derivatives in (X, T). The solver relies on
that identity; the finite-difference oracles here exist to check it
independently and never feed the solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError

#: Central-difference step for :func:`conformable_dx_numeric`.
DEFAULT_STEP = 1e-5
#: Increment used by :func:`conformable_dx_limit`.
DEFAULT_DELTA = 1e-6

Field = Callable[[float, float], float]


@dataclass(frozen=True)
class FracParams:
    """Conformable orders in space (``p``) and time (``q``)."""

    p: float = 1.0
    q: float = 1.0

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise DomainError(f"order {name}={v} outside (0, 1]")


def _check_order(p):
    if not 0 < p <= 1:
        raise DomainError(f"order {p} outside (0, 1]")


def to_stretched(x, t, params: FracParams = FracParams()):
    """Map physical (x, t) to (X, T) = (x**p/p, t**q/q). Accepts arrays."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(x < 0) or np.any(t < 0):
        raise DomainError("x and t must be non-negative")
    X = np.power(x, params.p) / params.p
    T = np.power(t, params.q) / params.q
    return _unwrap(X), _unwrap(T)


def from_stretched(X, T, params: FracParams = FracParams()):
    """Inverse of :func:`to_stretched`."""
    X = np.asarray(X, dtype=float)
    T = np.asarray(T, dtype=float)
    if np.any(X < 0) or np.any(T < 0):
        raise DomainError("X and T must be non-negative")
    x = np.power(params.p * X, 1.0 / params.p)
    t = np.power(params.q * T, 1.0 / params.q)
    return _unwrap(x), _unwrap(t)


def _unwrap(a):
    return float(a) if np.ndim(a) == 0 else a


def conformable_dx_numeric(h: Field, x: float, t: float, p: float, step: float = DEFAULT_STEP):
    """``x**(1-p)`` times the central difference of ``h`` in x."""
    _check_order(p)
    if x <= 0:
        raise DomainError(f"x={x} must be positive")
    if step <= 0:
        raise ValueError("step must be positive")
    d = (h(x + step, t) - h(x - step, t)) / (2 * step)
    return x ** (1 - p) * d


def conformable_dt_numeric(h: Field, x: float, t: float, q: float, step: float = DEFAULT_STEP):
    """Time analogue of :func:`conformable_dx_numeric`."""
    _check_order(q)
    if t <= 0:
        raise DomainError(f"t={t} must be positive")
    if step <= 0:
        raise ValueError("step must be positive")
    d = (h(x, t + step) - h(x, t - step)) / (2 * step)
    return t ** (1 - q) * d


def conformable_dx_limit(h: Field, x: float, t: float, p: float, delta: float = DEFAULT_DELTA):
    """Forward quotient of the limit definition at a finite ``delta``.

    The physical coordinate is advanced by ``delta * x**(1-p)``; as
    ``delta -> 0`` this tends to ``x**(1-p) * dh/dx``.
    """
    _check_order(p)
    if x <= 0:
        raise DomainError(f"x={x} must be positive")
    if delta <= 0:
        raise ValueError("delta must be positive")
    return (h(x + delta * x ** (1 - p), t) - h(x, t)) / delta
