"""Closed algebra of complex-exponential monomials in stretched coordinates.

Every quantity the decomposition handles is a finite sum of terms

    c * X**n * T**m * exp(mu*X) * exp(nu*T)

with complex ``c``, ``mu``, ``nu``. Trigonometric functions enter through
Euler's formula, so products stay inside the basis without rewrite rules.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidTerm, NonExactDivision, NotReal

#: Coefficients below this fraction of the largest one (floor 1) are dropped.
PRUNE_RTOL = 1e-14
#: Exponents closer than this are the same key.
KEY_ATOL = 1e-12
#: Allowed imaginary residue, relative to the summed term magnitudes.
EVAL_RTOL = 1e-10

AXES = ("X", "T")


def _as_complex(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidTerm(f"non-finite value {z!r}")
    return z


def _snap(z: complex) -> complex:
    re = 0.0 if abs(z.real) < KEY_ATOL else z.real
    im = 0.0 if abs(z.imag) < KEY_ATOL else z.imag
    return complex(re, im)


@dataclass(frozen=True)
class Term:
    """One basis element ``coeff * X**xpow * T**tpow * e**(xexp*X + texp*T)``."""

    coeff: complex
    xpow: int = 0
    tpow: int = 0
    xexp: complex = 0j
    texp: complex = 0j

    def __post_init__(self):
        if int(self.xpow) != self.xpow or int(self.tpow) != self.tpow:
            raise InvalidTerm("powers must be integers")
        if self.xpow < 0 or self.tpow < 0:
            raise InvalidTerm(f"negative power in {self!r}")
        object.__setattr__(self, "xpow", int(self.xpow))
        object.__setattr__(self, "tpow", int(self.tpow))
        object.__setattr__(self, "coeff", _as_complex(self.coeff))
        object.__setattr__(self, "xexp", _as_complex(self.xexp))
        object.__setattr__(self, "texp", _as_complex(self.texp))

    def key(self):
        return (self.xpow, self.tpow, self.xexp, self.texp)

    @classmethod
    def from_key(cls, coeff, key):
        return cls(coeff, *key)

    def value(self, X, T):
        return (
            self.coeff
            * np.power(X, self.xpow)
            * np.power(T, self.tpow)
            * np.exp(self.xexp * np.asarray(X) + self.texp * np.asarray(T))
        )


def _sort_key(key):
    n, m, mu, nu = key
    return (n, m, mu.real, mu.imag, nu.real, nu.imag)


def merge_terms(terms: Iterable, factory=Term.from_key) -> tuple:
    """Merge like keys, prune negligible coefficients, sort deterministically.

    Works for any term type exposing ``coeff``, ``key()`` with layout
    ``(int, int, complex, complex)`` and a ``from_key`` constructor.
    """
    buckets: dict[tuple[int, int], list[list]] = {}
    for t in terms:
        c = _as_complex(t.coeff)
        n, m, mu, nu = t.key()
        mu, nu = _snap(_as_complex(mu)), _snap(_as_complex(nu))
        slot = buckets.setdefault((n, m), [])
        for entry in slot:
            if abs(entry[0] - mu) < KEY_ATOL and abs(entry[1] - nu) < KEY_ATOL:
                entry[2] += c
                break
        else:
            slot.append([mu, nu, c])

    coeffs = [e[2] for slot in buckets.values() for e in slot]
    if not coeffs:
        return ()
    thresh = PRUNE_RTOL * max(1.0, max(abs(c) for c in coeffs))
    out = []
    for (n, m), slot in buckets.items():
        for mu, nu, c in slot:
            if abs(c) < thresh:
                continue
            re = 0.0 if abs(c.real) < thresh else c.real
            im = 0.0 if abs(c.imag) < thresh else c.imag
            out.append(factory(complex(re, im), (n, m, mu, nu)))
    out.sort(key=lambda t: _sort_key(t.key()))
    return tuple(out)


class Expression:
    """Canonical finite sum of :class:`Term` objects. Immutable."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Term] = ()):
        object.__setattr__(self, "terms", merge_terms(terms))

    def __setattr__(self, name, value):
        raise AttributeError("Expression is immutable")

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = const(other)
        if not isinstance(other, Expression):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return scale(self, -1)

    def __sub__(self, other):
        return add(self, -_coerce(other))

    def __rsub__(self, other):
        return add(_coerce(other), -self)

    def __mul__(self, other):
        if isinstance(other, Expression):
            return multiply(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __call__(self, X, T=0.0):
        return evaluate(self, X, T)

    def __repr__(self):
        return f"Expression({list(self.terms)!r})"

    def __str__(self):
        return format_expression(self)

    def is_zero(self) -> bool:
        return not self.terms

    def is_real(self) -> bool:
        return is_real(self)

    def allclose(self, other: "Expression", atol: float = 1e-12) -> bool:
        """True when every coefficient of ``self - other`` is below ``atol``."""
        return all(abs(t.coeff) <= atol for t in merge_terms(self.terms + (-other).terms))

    def to_json(self) -> list:
        return to_json(self)


def _coerce(obj) -> Expression:
    if isinstance(obj, Expression):
        return obj
    return const(obj)


def canonicalize(terms: Iterable[Term]) -> Expression:
    return Expression(terms)


ZERO = Expression()


def add(a: Expression, b: Expression) -> Expression:
    return Expression(a.terms + b.terms)


def scale(e: Expression, c) -> Expression:
    c = _as_complex(c)
    return Expression(Term.from_key(t.coeff * c, t.key()) for t in e.terms)


def multiply(a: Expression, b: Expression) -> Expression:
    return Expression(
        Term(
            s.coeff * t.coeff,
            s.xpow + t.xpow,
            s.tpow + t.tpow,
            s.xexp + t.xexp,
            s.texp + t.texp,
        )
        for s in a.terms
        for t in b.terms
    )


def _check_axis(axis):
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")


def differentiate(e: Expression, axis: str) -> Expression:
    """Exact partial derivative; in stretched coordinates this is the
    conformable derivative of the corresponding order."""
    _check_axis(axis)
    out = []
    for t in e.terms:
        if axis == "X":
            if t.xpow:
                out.append(Term(t.coeff * t.xpow, t.xpow - 1, t.tpow, t.xexp, t.texp))
            if t.xexp:
                out.append(Term(t.coeff * t.xexp, t.xpow, t.tpow, t.xexp, t.texp))
        else:
            if t.tpow:
                out.append(Term(t.coeff * t.tpow, t.xpow, t.tpow - 1, t.xexp, t.texp))
            if t.texp:
                out.append(Term(t.coeff * t.texp, t.xpow, t.tpow, t.xexp, t.texp))
    return Expression(out)


def integrate_T(e: Expression) -> Expression:
    """Antiderivative in T that vanishes at T = 0."""
    out = []
    for t in e.terms:
        c, n, m, mu, nu = t.coeff, t.xpow, t.tpow, t.xexp, t.texp
        if nu == 0:
            out.append(Term(c / (m + 1), n, m + 1, mu, 0j))
            continue
        # int tau^m e^(nu tau) = e^(nu tau) sum_k (-1)^k m!/(m-k)! tau^(m-k) / nu^(k+1)
        falling = 1.0
        for k in range(m + 1):
            if k:
                falling *= m - k + 1
            out.append(Term(c * (-1) ** k * falling / nu ** (k + 1), n, m - k, mu, nu))
        out.append(Term(-c * (-1) ** m * math.factorial(m) / nu ** (m + 1), n, 0, mu, 0j))
    return Expression(out)


def divide_by_X(e: Expression) -> Expression:
    out = []
    for t in e.terms:
        if t.xpow == 0:
            raise NonExactDivision(f"term {t!r} has no X factor", term=t)
        out.append(Term(t.coeff, t.xpow - 1, t.tpow, t.xexp, t.texp))
    return Expression(out)


def at_X0(e: Expression) -> Expression:
    """Restriction ``e(0, T)``."""
    return Expression(Term(t.coeff, 0, t.tpow, 0j, t.texp) for t in e.terms if t.xpow == 0)


def at_T0(e: Expression) -> Expression:
    """Restriction ``e(X, 0)``."""
    return Expression(Term(t.coeff, t.xpow, 0, t.xexp, 0j) for t in e.terms if t.tpow == 0)


def depends_on(e: Expression, axis: str) -> bool:
    _check_axis(axis)
    if axis == "X":
        return any(t.xpow or t.xexp for t in e.terms)
    return any(t.tpow or t.texp for t in e.terms)


def truncate_T(e: Expression, degree: int) -> Expression:
    """Taylor polynomial of ``e`` in T through ``T**degree``.

    Each ``e**(nu*T)`` factor is expanded; the X dependence is untouched.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    out = []
    for t in e.terms:
        if t.texp == 0:
            if t.tpow <= degree:
                out.append(t)
            continue
        for k in range(degree - t.tpow + 1):
            out.append(
                Term(t.coeff * t.texp**k / math.factorial(k), t.xpow, t.tpow + k, t.xexp, 0j)
            )
    return Expression(out)


def value(e: Expression, X, T):
    """Complex value of ``e`` at (X, T); broadcasts over arrays."""
    X = np.asarray(X, dtype=float)
    T = np.asarray(T, dtype=float)
    total = np.zeros(np.broadcast(X, T).shape, dtype=complex)
    for t in e.terms:
        total = total + t.value(X, T)
    return total[()] if total.ndim == 0 else total


def evaluate(e: Expression, X, T):
    """Real value of ``e`` at (X, T).

    Raises :class:`NotReal` when the imaginary residue exceeds
    ``EVAL_RTOL`` times the summed term magnitudes.
    """
    X = np.asarray(X, dtype=float)
    T = np.asarray(T, dtype=float)
    shape = np.broadcast(X, T).shape
    total = np.zeros(shape, dtype=complex)
    mag = np.zeros(shape)
    for t in e.terms:
        v = t.value(X, T)
        total = total + v
        mag = mag + np.abs(v)
    bad = np.abs(total.imag) > EVAL_RTOL * mag
    if np.any(bad):
        worst = float(np.max(np.abs(total.imag)))
        raise NotReal(f"imaginary residue {worst:.3e} in {e!r}")
    out = total.real
    return float(out) if out.ndim == 0 else out


def is_real(e: Expression, rtol: float = 1e-12) -> bool:
    """Check the conjugate-pair structure that makes ``e`` real-valued."""
    scale_ = max([1.0] + [abs(t.coeff) for t in e.terms])
    tol = rtol * scale_
    index = {}
    for t in e.terms:
        index.setdefault((t.xpow, t.tpow), []).append(t)
    for t in e.terms:
        cmu, cnu = t.xexp.conjugate(), t.texp.conjugate()
        partner = None
        for s in index[(t.xpow, t.tpow)]:
            if abs(s.xexp - cmu) < KEY_ATOL and abs(s.texp - cnu) < KEY_ATOL:
                partner = s
                break
        if partner is None or abs(partner.coeff - t.coeff.conjugate()) > tol:
            return False
    return True


# -- constructors ---------------------------------------------------------


def const(c) -> Expression:
    return Expression([Term(c)])


def xpow_n(n: int) -> Expression:
    return Expression([Term(1.0, xpow=n)])


def tpow_m(m: int) -> Expression:
    return Expression([Term(1.0, tpow=m)])


def exp_xt(lam: float, beta: float) -> Expression:
    return Expression([Term(1.0, xexp=lam, texp=beta)])


def _sin(lam, axis):
    z = 1j * lam
    key = {"xexp": z} if axis == "X" else {"texp": z}
    neg = {k: -v for k, v in key.items()}
    return Expression([Term(-0.5j, **key), Term(0.5j, **neg)])


def _cos(lam, axis):
    z = 1j * lam
    key = {"xexp": z} if axis == "X" else {"texp": z}
    neg = {k: -v for k, v in key.items()}
    return Expression([Term(0.5, **key), Term(0.5, **neg)])


def sin_x(lam: float = 1.0) -> Expression:
    return _sin(lam, "X")


def cos_x(lam: float = 1.0) -> Expression:
    return _cos(lam, "X")


def sin_t(beta: float = 1.0) -> Expression:
    return _sin(beta, "T")


def cos_t(beta: float = 1.0) -> Expression:
    return _cos(beta, "T")


X = xpow_n(1)
T = tpow_m(1)


# -- serialization --------------------------------------------------------


def _pair(z: complex):
    return [z.real, z.imag]


def to_json(e: Expression) -> list:
    return [
        {
            "coeff": _pair(t.coeff),
            "xpow": t.xpow,
            "tpow": t.tpow,
            "xexp": _pair(t.xexp),
            "texp": _pair(t.texp),
        }
        for t in e.terms
    ]


def _unpair(v) -> complex:
    if isinstance(v, (list, tuple)):
        re, im = v
        return complex(re, im)
    return complex(v)


def from_json(data: list) -> Expression:
    return Expression(
        Term(
            _unpair(d["coeff"]),
            int(d.get("xpow", 0)),
            int(d.get("tpow", 0)),
            _unpair(d.get("xexp", 0)),
            _unpair(d.get("texp", 0)),
        )
        for d in data
    )


# -- printing -------------------------------------------------------------


def _num(x: float) -> str:
    return f"{x:.12g}"


def _linear(a: float, b: float) -> str:
    parts = []
    for k, var in ((a, "X"), (b, "T")):
        if k == 0:
            continue
        mag = "" if abs(k) == 1 else f"{_num(abs(k))}*"
        sign = "-" if k < 0 else "+"
        parts.append((sign, f"{mag}{var}"))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def _powers(n, m):
    out = []
    if n:
        out.append("X" if n == 1 else f"X^{n}")
    if m:
        out.append("T" if m == 1 else f"T^{m}")
    return out


def _coeff_str(c: complex) -> str:
    if c.imag == 0:
        return _num(c.real)
    if c.real == 0:
        return f"{_num(c.imag)}j"
    return f"({_num(c.real)}{c.imag:+.12g}j)"


def format_expression(e: Expression) -> str:
    """Human-readable form; conjugate pairs are printed as real sin/cos."""
    if not e.terms:
        return "0"
    pieces = []
    used = set()
    terms = list(e.terms)
    for i, t in enumerate(terms):
        if i in used:
            continue
        used.add(i)
        osc = t.xexp.imag != 0 or t.texp.imag != 0
        partner = None
        if osc:
            for j in range(i + 1, len(terms)):
                s = terms[j]
                if (
                    j not in used
                    and s.key()[:2] == t.key()[:2]
                    and abs(s.xexp - t.xexp.conjugate()) < KEY_ATOL
                    and abs(s.texp - t.texp.conjugate()) < KEY_ATOL
                    and cmath.isclose(s.coeff, t.coeff.conjugate(), abs_tol=1e-14)
                ):
                    partner = j
                    break
        factors = _powers(t.xpow, t.tpow)
        growth = _linear(t.xexp.real, t.texp.real)
        if growth != "0":
            factors.append(f"exp({growth})")
        if partner is None:
            if osc:
                factors.append(f"exp(i*({_linear(t.xexp.imag, t.texp.imag)}))")
            pieces.append("*".join([_coeff_str(t.coeff)] + factors))
            continue
        used.add(partner)
        # c e^{i th} + conj = 2 Re(c) cos th - 2 Im(c) sin th
        a, b = t.xexp.imag, t.texp.imag
        c = t.coeff
        if a < 0 or (a == 0 and b < 0):
            a, b, c = -a, -b, c.conjugate()
        arg = _linear(a, b)
        trig = []
        if c.real:
            trig.append(f"{_num(2 * c.real)}*cos({arg})")
        if c.imag:
            trig.append(f"{_num(-2 * c.imag)}*sin({arg})")
        body = " + ".join(trig)
        if len(trig) > 1:
            body = f"({body})"
        pieces.append("*".join([body] + factors))
    pieces = [_drop_unit(piece) for piece in pieces]
    return " + ".join(pieces).replace("+ -", "- ")


def _drop_unit(piece: str) -> str:
    for unit, repl in (("1*", ""), ("-1*", "-")):
        if piece.startswith(unit):
            return repl + piece[len(unit):]
    return piece
