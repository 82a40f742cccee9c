"""Error tables, residual checks, solution surfaces and the transform report."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import ara
from . import expr as ex
from .conformable import (
    FracParams,
    conformable_dt_numeric,
    conformable_dx_numeric,
    to_stretched,
)
from .solver import (
    DEFAULT_ORDER,
    Geometry,
    ProblemSpec,
    SeriesSolution,
    example1,
    example2,
    partial_sum,
    solve,
)

#: Time samples of the reference error tables.
TABLE_T_VALUES = (0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5)

#: Step used for the nested finite differences in :func:`residual_check`.
RESIDUAL_STEP = 1e-4

EXAMPLES = {1: example1, 2: example2}


def problem_for(example: int) -> ProblemSpec:
    try:
        return EXAMPLES[int(example)]()
    except KeyError:
        raise ValueError(f"unknown example {example!r}; choose 1 or 2") from None


def exact_oracle(example: int, params: FracParams = FracParams()) -> Callable:
    """Closed-form solution ``(x, t) -> (u, v)`` in physical coordinates."""
    example = int(example)
    if example not in EXAMPLES:
        raise ValueError(f"unknown example {example!r}; choose 1 or 2")

    def oracle(x, t):
        X, T = to_stretched(x, t, params)
        if example == 1:
            u = np.exp(-np.asarray(T)) * np.sin(X)
        else:
            u = np.asarray(X) ** 2 * np.exp(T)
        u = float(u) if np.ndim(u) == 0 else u
        return u, u

    return oracle


@dataclass(frozen=True)
class ErrorTableRow:
    t: float
    exact: float
    approx: float
    abs_error: float


def approximation(sol: SeriesSolution, N: int, time_degree: int | None = None):
    """Partial sum through index N, optionally truncated in T.

    ``time_degree`` keeps the Taylor polynomial of the partial sum through
    ``T**time_degree``. A terminating series can reach the exact solution
    in closed form; the truncation gives the order-N time approximation
    the reference tables report.
    """
    U, V = partial_sum(sol, N)
    if time_degree is not None:
        U, V = ex.truncate_T(U, time_degree), ex.truncate_T(V, time_degree)
    return U, V


def error_table(
    example: int,
    N: int = DEFAULT_ORDER,
    x: float = 1.0,
    t_values: Sequence[float] = TABLE_T_VALUES,
    params: FracParams = FracParams(),
    time_degree: int | str | None = "order",
) -> list[ErrorTableRow]:
    """Exact versus approximate ``u`` at fixed x over ``t_values``.

    ``time_degree="order"`` truncates in T at degree N; ``None`` uses the
    raw partial sum.
    """
    if time_degree == "order":
        time_degree = N
    sol = solve(problem_for(example), N)
    U, _ = approximation(sol, N, time_degree)
    oracle = exact_oracle(example, params)
    rows = []
    for t in t_values:
        X, T = to_stretched(x, t, params)
        approx = ex.evaluate(U, X, T)
        exact = oracle(x, t)[0]
        rows.append(ErrorTableRow(float(t), exact, approx, abs(exact - approx)))
    return rows


def format_table(rows: Iterable[ErrorTableRow]) -> str:
    lines = [f"{'t':>6}  {'exact':>12}  {'approx':>12}  {'abs_error':>12}"]
    for r in rows:
        lines.append(f"{r.t:>6.6g}  {r.exact:>12.6g}  {r.approx:>12.6g}  {r.abs_error:>12.6g}")
    return "\n".join(lines) + "\n"


def write_table_csv(rows: Iterable[ErrorTableRow], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "exact", "approx", "abs_error"])
        for r in rows:
            w.writerow([_fmt(r.t), _fmt(r.exact), _fmt(r.approx), _fmt(r.abs_error)])


def _fmt(v: float) -> str:
    return "nan" if math.isnan(v) else f"{v:.12g}"


# -- residual -------------------------------------------------------------


def _physical(e: ex.Expression, params: FracParams):
    def h(x, t):
        X, T = to_stretched(x, t, params)
        return ex.evaluate(e, X, T)

    return h


def residual_check(
    spec: ProblemSpec,
    sol: SeriesSolution,
    params: FracParams,
    sample_points: Iterable[tuple[float, float]],
    N: int | None = None,
    step: float = RESIDUAL_STEP,
) -> float:
    """Largest PDE residual of the partial sum over ``sample_points``.

    The partial sum is evaluated in physical coordinates and every
    conformable derivative is taken numerically as ``x**(1-p) d/dx``;
    nothing is shared with the exact derivatives the solver uses.
    """
    U, V = partial_sum(sol, N)
    u, v = _physical(U, params), _physical(V, params)
    k, l = _physical(spec.source_k, params), _physical(spec.source_l, params)
    p, q = params.p, params.q

    def uv(x, t):
        return u(x, t) * v(x, t)

    def dx(h):
        return lambda x, t: conformable_dx_numeric(h, x, t, p, step)

    def linear(h, x, t):
        if spec.geometry is Geometry.REGULAR:
            return dx(dx(h))(x, t)
        X = x**p / p
        return dx(lambda xx, tt: (xx**p / p) * dx(h)(xx, tt))(x, t) / X

    worst = 0.0
    for x, t in sample_points:
        duv = dx(uv)(x, t)
        for w, coef, src in ((u, spec.alpha, k), (v, spec.beta, l)):
            res = (
                conformable_dt_numeric(w, x, t, q, step)
                - linear(w, x, t)
                + spec.lam * w(x, t) * dx(w)(x, t)
                + coef * duv
                - src(x, t)
            )
            worst = max(worst, abs(res))
    return worst


# -- surfaces -------------------------------------------------------------

SURFACE_HEADER = ("x", "t", "p", "q", "u_approx", "u_exact", "v_approx", "v_exact")


def emit_surface(
    problem: int | ProblemSpec,
    param_pairs: Sequence[tuple[float, float]],
    x_values: Sequence[float],
    t_values: Sequence[float],
    path,
    N: int = DEFAULT_ORDER,
) -> int:
    """Write approximate and exact solutions on a grid to CSV.

    Rows run over (p, q) pairs, then t, then x. Exact columns are ``nan``
    for problems without a closed form. Returns the number of data rows.
    """
    if isinstance(problem, ProblemSpec):
        spec, example = problem, None
    else:
        example = int(problem)
        spec = problem_for(example)
    sol = solve(spec, N)
    U, V = partial_sum(sol, N)
    count = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SURFACE_HEADER)
        for p, q in param_pairs:
            params = FracParams(p, q)
            oracle = exact_oracle(example, params) if example else None
            for t in t_values:
                for x in x_values:
                    X, T = to_stretched(x, t, params)
                    ua, va = ex.evaluate(U, X, T), ex.evaluate(V, X, T)
                    ue, ve = oracle(x, t) if oracle else (math.nan, math.nan)
                    w.writerow([_fmt(v) for v in (x, t, p, q, ua, ue, va, ve)])
                    count += 1
    return count


# -- transform table ------------------------------------------------------


@dataclass(frozen=True)
class TransformCheck:
    name: str
    formula: str
    method: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


#: Fields the derivative and multiplication identities are exercised on.
IDENTITY_FIELDS = (
    ex.const(1),
    ex.sin_x(1) * ex.exp_xt(0, -1),
    ex.xpow_n(2) * ex.exp_xt(0, 1),
    ex.sin_x(1) * ex.sin_t(1) + ex.X * ex.T * ex.exp_xt(2, -1),
)

ELEMENTARY_TOL = 1e-8
PANEL_TOL = 1e-12


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _elementary(name, formula, e, closed_form, r, s, cfg, params_list):
    image = ara.double_ara(e)
    sym = image(r, s)
    worst = _rel(sym, closed_form(r, s))
    orders = ara.exponential_order(e)
    for params in params_list:
        quad = ara.numeric_double_ara(ara.expression_field(e, params), r, s, params, cfg, orders)
        worst = max(worst, _rel(quad, sym))
    return TransformCheck(name, formula, "image vs closed form vs quadrature", worst, ELEMENTARY_TOL)


def transform_checks(
    r: float = 3.0,
    s: float = 3.0,
    cfg: ara.QuadratureConfig = ara.QuadratureConfig(node_count=64),
    params_list: Sequence[FracParams] = (FracParams(1, 1), FracParams(0.8, 0.5)),
    panel=ara.DEFAULT_PANEL,
) -> list[TransformCheck]:
    """Run every row of the transform table through its check."""
    lam, beta = 1.0, 1.0
    n, m = 2, 1
    rows = [
        _elementary("1", "1", ex.const(1), lambda r, s: 1.0, r, s, cfg, params_list),
        _elementary(
            f"X^{n} T^{m}",
            "n! m! / (r^n s^m)",
            ex.xpow_n(n) * ex.tpow_m(m),
            lambda r, s: math.factorial(n) * math.factorial(m) / (r**n * s**m),
            r, s, cfg, params_list,
        ),
        _elementary(
            "exp(lam X + beta T)",
            "r s / ((r - lam)(s - beta))",
            ex.exp_xt(lam, beta),
            lambda r, s: r * s / ((r - lam) * (s - beta)),
            r, s, cfg, params_list,
        ),
        _elementary(
            "sin(lam X) sin(beta T)",
            "lam beta r s / ((r^2 + lam^2)(s^2 + beta^2))",
            ex.sin_x(lam) * ex.sin_t(beta),
            lambda r, s: lam * beta * r * s / ((r**2 + lam**2) * (s**2 + beta**2)),
            r, s, cfg, params_list,
        ),
    ]
    t3 = {
        "mulX": ("X h", "-r d/dr (G / r)"),
        "mulT": ("T h", "-s d/ds (G / s)"),
        "mulX2": ("X^2 h", "G_rr - (2/r) G_r + (2/r^2) G"),
        "mulT2": ("T^2 h", "G_ss - (2/s) G_s + (2/s^2) G"),
        "mulXT": ("X T h", "G_rs - G_r / s - G_s / r + G / (r s)"),
    }
    for case, (name, formula) in t3.items():
        res = max(ara.check_theorem3(e, case, panel) for e in IDENTITY_FIELDS)
        rows.append(TransformCheck(name, formula, "numeric panel", res, PANEL_TOL))
    t4 = {
        "dX": ("d/dX h", "r G - r G_t[h(0, T)]"),
        "dT": ("d/dT h", "s G - s G_x[h(X, 0)]"),
        "dXX": ("d2/dX2 h", "r^2 G - r^2 G_t[h(0, T)] - r G_t[h_X(0, T)]"),
        "dTT": ("d2/dT2 h", "s^2 G - s^2 G_x[h(X, 0)] - s G_x[h_T(X, 0)]"),
    }
    for case, (name, formula) in t4.items():
        worst = 0.0
        for e in IDENTITY_FIELDS:
            diff = ara.check_theorem4(e, case)
            worst = max([worst] + [abs(t.coeff) for t in diff.terms])
        rows.append(TransformCheck(name, formula, "symbolic", worst, 0.0))
    t5 = {
        "X_dT": ("X d/dT h", "-r s d/dr (G / r) + r s d/dr (G_x[h(X, 0)] / r)"),
        "T_dX": ("T d/dX h", "-r s d/ds (G / s) + r s d/ds (G_t[h(0, T)] / s)"),
    }
    for case, (name, formula) in t5.items():
        res = max(ara.check_theorem5(e, case, panel) for e in IDENTITY_FIELDS)
        rows.append(TransformCheck(name, formula, "numeric panel", res, PANEL_TOL))
    return rows


def format_transform_report(rows: Sequence[TransformCheck]) -> str:
    width = max(len(r.name) for r in rows)
    lines = []
    for r in rows:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"{status}  {r.name:<{width}}  residual={r.residual:.3e}  "
            f"tol={r.tolerance:.0e}  [{r.method}]  {r.formula}"
        )
    passed = sum(r.passed for r in rows)
    lines.append(f"{passed}/{len(rows)} rows passed")
    return "\n".join(lines) + "\n"


def verify_transforms(path=None, **kwargs) -> list[TransformCheck]:
    """Run :func:`transform_checks` and write the text report to ``path``."""
    rows = transform_checks(**kwargs)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(format_transform_report(rows))
    return rows
