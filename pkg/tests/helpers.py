"""Random real expressions over the basis, for property tests.

Exponent real and imaginary parts are drawn from a half-integer grid;
n, m <= 4 and |mu|, |nu| <= 2 hold for every term.
"""

import numpy as np
from hypothesis import strategies as st

from fracburgers import expr as ex

RATES = (-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5)
FREQS = (0.0, 0.5, 1.0, 1.5)
#: (rate, frequency) pairs whose complex exponent has modulus at most 2.
PAIRS = tuple((a, b) for a in RATES for b in FREQS if a * a + b * b <= 4.0)


def _axis_factor(kind, pair, axis):
    rate, freq = pair
    growth = ex.exp_xt(rate, 0) if axis == "X" else ex.exp_xt(0, rate)
    if kind == "exp" or freq == 0:
        return growth
    trig = {
        ("sin", "X"): ex.sin_x,
        ("cos", "X"): ex.cos_x,
        ("sin", "T"): ex.sin_t,
        ("cos", "T"): ex.cos_t,
    }[(kind, axis)]
    return growth * trig(freq)


def product_term(coeff, n, m, xspec, tspec):
    return (
        ex.const(coeff)
        * ex.xpow_n(n)
        * ex.tpow_m(m)
        * _axis_factor(*xspec, "X")
        * _axis_factor(*tspec, "T")
    )


_axis_spec = st.tuples(
    st.sampled_from(("exp", "sin", "cos")), st.sampled_from(PAIRS)
)

real_products = st.builds(
    product_term,
    st.floats(-3, 3, allow_nan=False).filter(lambda c: abs(c) > 1e-3),
    st.integers(0, 4),
    st.integers(0, 4),
    _axis_spec,
    _axis_spec,
)

real_expressions = st.lists(real_products, min_size=1, max_size=3).map(
    lambda parts: sum(parts[1:], parts[0])
)


def random_expression(rng: np.random.Generator, max_parts: int = 3) -> ex.Expression:
    """numpy-driven counterpart of :data:`real_expressions`."""
    total = ex.ZERO
    for _ in range(rng.integers(1, max_parts + 1)):
        spec = []
        for _axis in ("X", "T"):
            pair = PAIRS[int(rng.integers(len(PAIRS)))]
            spec.append((str(rng.choice(["exp", "sin", "cos"])), pair))
        coeff = float(rng.uniform(-3, 3))
        total = total + product_term(coeff, int(rng.integers(0, 5)), int(rng.integers(0, 5)), *spec)
    return total


def max_rel_diff(a: ex.Expression, b: ex.Expression) -> float:
    """Largest coefficient of ``a - b`` relative to the coefficient scale."""
    diff = a - b
    scale = max([1.0] + [abs(t.coeff) for t in a.terms + b.terms])
    return max([0.0] + [abs(t.coeff) for t in diff.terms]) / scale
