"""Acceptance suite: one test per criterion, each at its stated tolerance.

Each test prints a PASS/FAIL line and records it for the
"acceptance criteria" section of the pytest terminal summary.
"""

import math
import time

import numpy as np
import pytest

from conftest import record
from fracburgers import ara
from fracburgers import evaluation as ev
from fracburgers import expr as ex
from fracburgers.cli import main
from fracburgers.conformable import FracParams, to_stretched
from fracburgers.solver import example1, example2, partial_sum, solve
from helpers import random_expression
from reference_values import EXAMPLE1_ERRORS, EXAMPLE2_ERRORS


def _report(number, name, passed, detail):
    record(number, name, passed, detail)
    print(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {name} ({detail})")


def _table_errors(capsys, example):
    start = time.perf_counter()
    code = main(["table", "--example", str(example), "--order", "6", "--x", "1"])
    elapsed = time.perf_counter() - start
    lines = capsys.readouterr().out.strip().splitlines()[1:]
    return code, [float(line.split()[-1]) for line in lines], elapsed


@pytest.mark.parametrize(
    "number,example,reference",
    [(1, 1, EXAMPLE1_ERRORS), (2, 2, EXAMPLE2_ERRORS)],
    ids=["criterion1_table_example1", "criterion2_table_example2"],
)
def test_error_table_reproduction(capsys, number, example, reference):
    code, errors, elapsed = _table_errors(capsys, example)
    rel = [abs(a - b) / b for a, b in zip(errors, reference)]
    ok = code == 0 and len(errors) == 9 and max(rel) < 5e-3 and elapsed < 1.0
    with capsys.disabled():
        _report(number, f"error table, example {example}", ok,
                f"max rel dev {max(rel):.2e} < 5e-3, {elapsed:.2f}s")
    assert code == 0 and len(errors) == 9
    assert max(rel) < 5e-3
    assert elapsed < 1.0


def test_criterion3_example1_symbolic_terms():
    sol = solve(example1(), 3)
    s = ex.sin_x(1)
    want = [s, -1 * ex.T * s, 0.5 * ex.tpow_m(2) * s, ex.const(-1 / 6) * ex.tpow_m(3) * s]
    ok = sol.u_components == want and sol.v_components == want
    _report(3, "example 1 series terms u0..u3, v0..v3", ok, "exact canonical equality")
    assert sol.u_components == want
    assert sol.v_components == want


def test_criterion4_example2_termination():
    sol = solve(example2(), 6)
    eT = ex.exp_xt(0, 1)
    u0 = ex.xpow_n(2) * eT - 4 * eT + 4
    u1 = 4 * eT - 4
    U, V = partial_sum(sol)
    ok = (
        sol.u_components[0] == u0
        and sol.u_components[1] == u1
        and sol.terminated_at == 2
        and U == ex.xpow_n(2) * eT
        and V == U
    )
    _report(4, "example 2 terminates at the exact solution", ok,
            f"terminated_at={sol.terminated_at}, U={U}")
    assert sol.u_components[0] == u0
    assert sol.u_components[1] == u1
    assert sol.terminated_at == 2
    assert U == ex.xpow_n(2) * eT and V == U


def test_criterion5_transform_table():
    rows = ev.transform_checks(r=3.0, s=3.0, cfg=ara.QuadratureConfig(node_count=64))
    elementary = [r for r in rows if r.method.startswith("image vs")]
    symbolic = [r for r in rows if r.method == "symbolic"]
    panel = [r for r in rows if r.method == "numeric panel"]
    ok = (
        len(elementary) == 4
        and len(symbolic) == 4
        and len(panel) == 7
        and all(r.residual < 1e-8 for r in elementary)
        and all(r.residual == 0 for r in symbolic)
        and all(r.residual < 1e-12 for r in panel)
    )
    worst = max(r.residual for r in elementary + panel)
    _report(5, "transform table", ok, f"{len(rows)} rows, worst numeric residual {worst:.2e}")
    assert ok, ev.format_transform_report(rows)


def test_criterion6_time_integration_identity():
    rng = np.random.default_rng(20260601)
    worst = max(ara.check_time_integration(random_expression(rng)) for _ in range(50))
    ok = worst < 1e-12
    _report(6, "time-integration identity on 50 random expressions", ok, f"max residual {worst:.2e}")
    assert worst < 1e-12


def test_criterion7_residual_decay():
    sol = solve(example1(), 8)
    vals = [
        ev.residual_check(example1(), sol, FracParams(1, 1), [(1.0, 0.3)], N=n) for n in (2, 4, 6, 8)
    ]
    monotone = all(a >= b for a, b in zip(vals, vals[1:]))
    ok = monotone and vals[-1] < 1e-5
    _report(7, "residual decay N=2,4,6,8", ok, ", ".join(f"{v:.2e}" for v in vals))
    assert monotone
    assert vals[-1] < 1e-5


def test_criterion8_fractional_orders():
    params = FracParams(0.9, 0.9)
    sol = solve(example1(), 6)
    U, _ = partial_sum(sol, 6)
    oracle = ev.exact_oracle(1, params)
    worst = 0.0
    for x in np.linspace(0.5, 2.0, 16):
        for t in np.linspace(0.05, 0.5, 10):
            X, T = to_stretched(float(x), float(t), params)
            worst = max(worst, abs(ex.evaluate(U, X, T) - oracle(float(x), float(t))[0]))
    T_max = to_stretched(1.0, 0.5, params)[1]
    ok = worst < 2e-7
    _report(8, "p = q = 0.9 against exp(-T) sin X", ok,
            f"max error {worst:.2e} vs bound 2e-7; T^7/7! at t=0.5 is "
            f"{T_max**7 / math.factorial(7):.2e}")
    assert worst < 2e-7


def _round_trip_and_reality(f):
    g = ara.double_ara(f)
    if ara.inverse_double_ara(g) != f:
        return False
    if ex.from_json(ex.to_json(f)) != f:
        return False
    for h in (f, ex.differentiate(f, "X"), ex.integrate_T(f), f * f):
        if not h.is_real():
            return False
    for r, s in ara.DEFAULT_PANEL[:2]:
        v = g(r, s)
        if abs(v.imag) > 1e-12 * max(1.0, abs(v)):
            return False
    ex.evaluate(f, 0.7, 0.4)  # raises NotReal on an imaginary residue
    return True


def test_criterion9_property_suites():
    rng = np.random.default_rng(9)
    exprs = [random_expression(rng) for _ in range(500)]
    assert all(
        t.xpow <= 4 and t.tpow <= 4 and abs(t.xexp) <= 2 and abs(t.texp) <= 2
        for f in exprs
        for t in f.terms
    )
    start = time.perf_counter()
    failures = sum(not _round_trip_and_reality(f) for f in exprs)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 5.0
    _report(9, "round-trip and reality on 500 random expressions", ok,
            f"{failures} failures, {elapsed:.2f}s")
    assert failures == 0
    assert elapsed < 5.0
