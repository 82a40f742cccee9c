"""Error tables, residuals, surfaces and the transform report.

Table oracle: the order-6 Taylor remainder of the exact solution in T,
summed independently with ``math.fsum``.
"""

import csv
import math

import numpy as np
import pytest

from fracburgers import evaluation as ev
from fracburgers.conformable import FracParams
from fracburgers.solver import example1, solve
from reference_values import (
    EXAMPLE1_ERRORS,
    EXAMPLE1_EXACT,
    EXAMPLE2_ERRORS,
    EXAMPLE2_EXACT,
    T_VALUES,
)


def _remainder(T, sign):
    # |e^{sign T} - sum_{k<=6} (sign T)^k / k!|
    z = sign * T
    return abs(math.exp(z) - math.fsum(z**k / math.factorial(k) for k in range(7)))


def test_remainder_oracle_matches_reference_example1():
    for t, want in zip(T_VALUES, EXAMPLE1_ERRORS):
        assert math.sin(1) * _remainder(t, -1) == pytest.approx(want, rel=5e-3)


def test_remainder_oracle_matches_reference_example2():
    for t, want in zip(T_VALUES, EXAMPLE2_ERRORS):
        assert _remainder(t, 1) == pytest.approx(want, rel=5e-3)


@pytest.mark.parametrize("example,sign,scale", [(1, -1, math.sin(1)), (2, 1, 1.0)])
def test_table_against_oracle(example, sign, scale):
    rows = ev.error_table(example)
    assert [r.t for r in rows] == list(T_VALUES)
    for r in rows:
        assert r.abs_error == pytest.approx(scale * _remainder(r.t, sign), rel=1e-3)


@pytest.mark.parametrize("example,exact", [(1, EXAMPLE1_EXACT), (2, EXAMPLE2_EXACT)])
def test_table_exact_column(example, exact):
    for r, want in zip(ev.error_table(example), exact):
        assert r.exact == pytest.approx(want, abs=6e-6)


def test_untruncated_example2_is_exact():
    rows = ev.error_table(2, time_degree=None)
    assert max(r.abs_error for r in rows) < 1e-14


def test_csv_table(tmp_path):
    path = tmp_path / "t.csv"
    ev.write_table_csv(ev.error_table(1), path)
    with open(path, newline="") as fh:
        data = list(csv.reader(fh))
    assert data[0] == ["t", "exact", "approx", "abs_error"]
    assert len(data) == 10
    assert b"\r" not in path.read_bytes()


def test_format_table_has_rows():
    text = ev.format_table(ev.error_table(1))
    assert len(text.strip().splitlines()) == 10


def test_unknown_example():
    with pytest.raises(ValueError):
        ev.problem_for(3)
    with pytest.raises(ValueError):
        ev.exact_oracle(7)


def test_residual_decreases_with_order():
    sol = solve(example1(), 8)
    vals = [ev.residual_check(example1(), sol, FracParams(), [(1.0, 0.3)], N=n) for n in (2, 4, 6, 8)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-5


@pytest.mark.parametrize("pq", [(1.0, 1.0), (0.8, 0.8), (0.7, 0.9)])
def test_example2_residual_small_for_fractional_orders(pq):
    from fracburgers.solver import example2

    sol = solve(example2(), 6)
    res = ev.residual_check(example2(), sol, FracParams(*pq), [(1.0, 0.3), (1.5, 0.4)])
    assert res < 1e-5


def test_fractional_orders_track_stretched_oracle():
    # pointwise error equals the T^7/7! remainder times |sin X| (to leading order)
    params = FracParams(0.9, 0.9)
    sol = solve(example1(), 6)
    U, _ = ev.approximation(sol, 6)
    oracle = ev.exact_oracle(1, params)
    from fracburgers import expr as ex
    from fracburgers.conformable import to_stretched

    for x in (0.5, 1.0, 2.0):
        for t in (0.1, 0.3, 0.5):
            X, T = to_stretched(x, t, params)
            err = abs(ex.evaluate(U, X, T) - oracle(x, t)[0])
            assert err <= T**7 / math.factorial(7) * abs(math.sin(X)) * 1.001 + 1e-15


def test_surface_csv(tmp_path):
    path = tmp_path / "s.csv"
    n = ev.emit_surface(1, [(1.0, 1.0), (0.9, 0.8)], [0.5, 1.0], [0.1, 0.2, 0.3], path)
    assert n == 12
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == list(ev.SURFACE_HEADER)
    errs = [abs(float(r["u_approx"]) - float(r["u_exact"])) for r in rows]
    assert max(errs) < 1e-6


def test_surface_from_spec_has_nan_exact(tmp_path):
    path = tmp_path / "s.csv"
    ev.emit_surface(example1(), [(1.0, 1.0)], [1.0], [0.2], path)
    with open(path, newline="") as fh:
        (row,) = list(csv.DictReader(fh))
    assert np.isnan(float(row["u_exact"]))


def test_transform_report(tmp_path):
    path = tmp_path / "report.txt"
    rows = ev.verify_transforms(path)
    assert len(rows) == 15
    assert all(r.passed for r in rows)
    assert path.read_text().strip().endswith("15/15 rows passed")


def test_surface_csv_is_deterministic(tmp_path):
    args = (2, [(0.8, 0.9)], [0.5, 1.25, 2.0], [0.1, 0.5])
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    ev.emit_surface(*args, a)
    ev.emit_surface(*args, b)
    assert a.read_bytes() == b.read_bytes()
