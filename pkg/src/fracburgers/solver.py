"""Double ARA decomposition for regular and singular coupled Burgers systems.

The systems are, in stretched coordinates (X, T),

    u_T - L u + lam * u u_X + alpha * (u v)_X = k(X, T),   u(X, 0) = k1(X)
    v_T - L v + lam * v v_X + beta  * (u v)_X = l(X, T),   v(X, 0) = l1(X)

with ``L = d^2/dX^2`` (regular) or the Bessel operator
``L w = (1/X) d/dX (X dw/dX)`` (singular). Transforming in both variables,
dividing by ``s`` and inverting gives the recursion

    u_{n+1} = int_0^T [L u_n - lam * A_n - alpha * d/dX C_n] dT'

because dividing an image by ``s`` is time integration from 0
(see :func:`fracburgers.ara.check_time_integration`).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Sequence

from . import expr as ex
from .adomian import adomian_A, adomian_B, adomian_C
from .ara import DEFAULT_PANEL, double_ara, inverse_double_ara
from .errors import InvalidProblem, NonExactDivision, SingularStepError
from .expr import Expression

DEFAULT_ORDER = 6


class Geometry(enum.Enum):
    REGULAR = "regular"
    SINGULAR_BESSEL = "singular_bessel"


@dataclass(frozen=True)
class ProblemSpec:
    """Coefficients, sources and initial data of a coupled Burgers system."""

    lam: float
    alpha: float
    beta: float
    source_k: Expression = ex.ZERO
    source_l: Expression = ex.ZERO
    ic_k1: Expression = ex.ZERO
    ic_l1: Expression = ex.ZERO
    geometry: Geometry = Geometry.REGULAR

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        for name in ("ic_k1", "ic_l1"):
            if ex.depends_on(getattr(self, name), "T"):
                raise InvalidProblem(f"initial condition {name} depends on T")

    def to_json(self) -> dict:
        return {
            "lambda": self.lam,
            "alpha": self.alpha,
            "beta": self.beta,
            "geometry": self.geometry.value,
            "source_k": ex.to_json(self.source_k),
            "source_l": ex.to_json(self.source_l),
            "ic_k1": ex.to_json(self.ic_k1),
            "ic_l1": ex.to_json(self.ic_l1),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ProblemSpec":
        try:
            return cls(
                lam=float(data["lambda"]),
                alpha=float(data["alpha"]),
                beta=float(data["beta"]),
                source_k=ex.from_json(data.get("source_k", [])),
                source_l=ex.from_json(data.get("source_l", [])),
                ic_k1=ex.from_json(data.get("ic_k1", [])),
                ic_l1=ex.from_json(data.get("ic_l1", [])),
                geometry=Geometry(data.get("geometry", "regular")),
            )
        except (KeyError, TypeError, ValueError) as err:
            if isinstance(err, InvalidProblem):
                raise
            raise InvalidProblem(f"malformed problem description: {err}") from err

    @classmethod
    def load(cls, path) -> "ProblemSpec":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def example1() -> ProblemSpec:
    """Homogeneous regular system with ``u(X, 0) = v(X, 0) = sin X``."""
    return ProblemSpec(
        lam=-2.0, alpha=1.0, beta=1.0, ic_k1=ex.sin_x(1), ic_l1=ex.sin_x(1)
    )


def example2() -> ProblemSpec:
    """Singular Bessel system whose solution is ``X**2 * e**T``."""
    src = ex.xpow_n(2) * ex.exp_xt(0, 1) - 4 * ex.exp_xt(0, 1)
    return ProblemSpec(
        lam=-2.0,
        alpha=1.0,
        beta=1.0,
        source_k=src,
        source_l=src,
        ic_k1=ex.xpow_n(2),
        ic_l1=ex.xpow_n(2),
        geometry=Geometry.SINGULAR_BESSEL,
    )


PRESETS = {"example1": example1, "example2": example2}


@dataclass
class SeriesSolution:
    u_components: list
    v_components: list
    spec: ProblemSpec
    terminated_at: int | None = None

    @property
    def order(self) -> int:
        return len(self.u_components) - 1

    def partial_sum(self, N: int | None = None):
        return partial_sum(self, N)


def bessel(w: Expression) -> Expression:
    """``(1/X) d/dX (X dw/dX)``; raises NonExactDivision if X^-1 would appear."""
    inner = ex.multiply(ex.X, ex.differentiate(w, "X"))
    return ex.divide_by_X(ex.differentiate(inner, "X"))


def linear_part(spec: ProblemSpec, w: Expression) -> Expression:
    if spec.geometry is Geometry.REGULAR:
        return ex.differentiate(ex.differentiate(w, "X"), "X")
    try:
        return bessel(w)
    except NonExactDivision as err:
        raise SingularStepError(
            f"Bessel operator leaves the basis at term {err.term!r}", term=err.term
        ) from err


def init_components(spec: ProblemSpec):
    """``u0 = k1 + int_0^T k``, ``v0 = l1 + int_0^T l``."""
    u0 = spec.ic_k1 + ex.integrate_T(spec.source_k)
    v0 = spec.ic_l1 + ex.integrate_T(spec.source_l)
    return u0, v0


def integrands(spec: ProblemSpec, u: Sequence[Expression], v: Sequence[Expression], n: int):
    """Right-hand sides whose time integrals are ``u_{n+1}`` and ``v_{n+1}``."""
    dC = ex.differentiate(adomian_C(u, v, n), "X")
    fu = linear_part(spec, u[n]) - spec.lam * adomian_A(u, n) - spec.alpha * dC
    fv = linear_part(spec, v[n]) - spec.lam * adomian_B(v, n) - spec.beta * dC
    return fu, fv


def step_regular(spec: ProblemSpec, u, v, n: int):
    if spec.geometry is not Geometry.REGULAR:
        raise ValueError("step_regular needs a regular problem")
    fu, fv = integrands(spec, u, v, n)
    return ex.integrate_T(fu), ex.integrate_T(fv)


def step_singular(spec: ProblemSpec, u, v, n: int):
    if spec.geometry is not Geometry.SINGULAR_BESSEL:
        raise ValueError("step_singular needs a singular problem")
    fu, fv = integrands(spec, u, v, n)
    return ex.integrate_T(fu), ex.integrate_T(fv)


def step(spec: ProblemSpec, u, v, n: int):
    if spec.geometry is Geometry.REGULAR:
        return step_regular(spec, u, v, n)
    return step_singular(spec, u, v, n)


def solve(spec: ProblemSpec, N: int = DEFAULT_ORDER) -> SeriesSolution:
    """Components ``u_0 .. u_N`` and ``v_0 .. v_N``.

    Termination is declared at the first ``k >= 1`` where both ``u_k, v_k``
    and ``u_{k+1}, v_{k+1}`` vanish identically (the second pair may be
    computed one step past ``N`` as a look-ahead). Remaining slots are
    filled with zero.
    """
    if N < 0:
        raise ValueError("order must be non-negative")
    u0, v0 = init_components(spec)
    u, v = [u0], [v0]
    terminated = None
    n = 0
    while len(u) <= N:
        un, vn = step(spec, u, v, n)
        u.append(un)
        v.append(vn)
        n += 1
        if un.is_zero() and vn.is_zero():
            ahead_u, ahead_v = step(spec, u, v, n)
            if ahead_u.is_zero() and ahead_v.is_zero():
                terminated = n
                break
    while len(u) <= N:
        u.append(ex.ZERO)
        v.append(ex.ZERO)
    return SeriesSolution(u, v, spec, terminated)


def partial_sum(sol: SeriesSolution, N: int | None = None):
    """``(sum_{n<=N} u_n, sum_{n<=N} v_n)``."""
    if N is None:
        N = sol.order
    if N > sol.order or N < 0:
        raise ValueError(f"order {N} not available (solution has {sol.order})")
    U = ex.Expression(t for e in sol.u_components[: N + 1] for t in e.terms)
    V = ex.Expression(t for e in sol.v_components[: N + 1] for t in e.terms)
    return U, V


def pde_residual(spec: ProblemSpec, U: Expression, V: Expression):
    """Left-hand side minus source for a candidate solution, symbolically."""
    dUV = ex.differentiate(U * V, "X")
    ru = (
        ex.differentiate(U, "T")
        - linear_part(spec, U)
        + spec.lam * U * ex.differentiate(U, "X")
        + spec.alpha * dUV
        - spec.source_k
    )
    rv = (
        ex.differentiate(V, "T")
        - linear_part(spec, V)
        + spec.lam * V * ex.differentiate(V, "X")
        + spec.beta * dUV
        - spec.source_l
    )
    return ru, rv


def transform_route_step(spec: ProblemSpec, u, v, n: int, panel=DEFAULT_PANEL):
    """One recursion step computed through the image domain.

    The integrand is transformed, scaled by ``1/s`` on the panel and
    compared with the image of the directly computed component; the inverse
    is taken through the time-integration identity. Returns
    ``(u_next, v_next, panel_residual)``.
    """
    fu, fv = integrands(spec, u, v, n)
    out, worst = [], 0.0
    for f, direct in zip((fu, fv), step(spec, u, v, n)):
        F = double_ara(f)
        D = double_ara(direct)
        for r, s in panel:
            a, b = D(r, s), F(r, s) / s
            worst = max(worst, abs(a - b) / max(1.0, abs(a)))
        out.append(ex.integrate_T(inverse_double_ara(F)))
    return out[0], out[1], worst
