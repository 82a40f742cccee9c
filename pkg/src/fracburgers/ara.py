"""Single and double conformable ARA transforms on the monomial basis.

After the substitution ``u = x**p/p`` the double transform of a field is

    G(r, s) = r*s * int_0^inf int_0^inf exp(-r*u - s*v) h(u, v) du dv,

so the image of a basis term ``c X^n T^m e^(mu X) e^(nu T)`` is

    c * n! * m! * r * s / ((r - mu)**(n+1) * (s - nu)**(m+1))

independently of the orders p, q. Images are kept in that form
(:class:`ImageExpr`), which is in bijection with :class:`Expression`.
Identities whose right-hand sides leave that form are handled either in
partial-fraction normal form (:class:`RationalImage`, exact) or on a panel
of numeric sample points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from . import expr as ex
from .conformable import FracParams, from_stretched, to_stretched
from .errors import AbscissaError, NotSeparable
from .expr import Expression, Term, merge_terms

#: Generic (r, s) sample points used by the numeric identity checks.
DEFAULT_PANEL = (
    (3.3, 2.7),
    (4.1, 5.3),
    (5.7, 3.9),
    (6.2, 6.8),
    (3.9, 7.4),
    (7.1, 4.4),
)


# -- image basis ----------------------------------------------------------


@dataclass(frozen=True)
class ImageTerm:
    """``coeff * xfact! * tfact! * r*s / ((r-xpole)**(xfact+1) (s-tpole)**(tfact+1))``."""

    coeff: complex
    xfact: int = 0
    tfact: int = 0
    xpole: complex = 0j
    tpole: complex = 0j

    def key(self):
        return (self.xfact, self.tfact, self.xpole, self.tpole)

    @classmethod
    def from_key(cls, coeff, key):
        return cls(complex(coeff), *key)

    def __call__(self, r, s):
        n, m = self.xfact, self.tfact
        return (
            self.coeff
            * math.factorial(n)
            * math.factorial(m)
            * r
            * s
            / ((r - self.xpole) ** (n + 1) * (s - self.tpole) ** (m + 1))
        )


class ImageExpr:
    """Canonical sum of :class:`ImageTerm`; the exact image of an Expression."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[ImageTerm] = ()):
        self.terms = merge_terms(terms, ImageTerm.from_key)

    def __eq__(self, other):
        if not isinstance(other, ImageExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __add__(self, other):
        return ImageExpr(self.terms + other.terms)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c) -> "ImageExpr":
        return ImageExpr(ImageTerm.from_key(t.coeff * c, t.key()) for t in self.terms)

    def __call__(self, r, s):
        return sum((t(r, s) for t in self.terms), 0j)

    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        return f"ImageExpr({list(self.terms)!r})"

    def poles(self):
        return {t.xpole for t in self.terms}, {t.tpole for t in self.terms}


def double_ara(e: Expression) -> ImageExpr:
    """Exact double conformable ARA image, term by term."""
    return ImageExpr(ImageTerm(t.coeff, t.xpow, t.tpow, t.xexp, t.texp) for t in e.terms)


def inverse_double_ara(g: ImageExpr) -> Expression:
    """Exact inverse of :func:`double_ara` by reading the basis table backwards."""
    return Expression(Term(t.coeff, t.xfact, t.tfact, t.xpole, t.tpole) for t in g.terms)


@dataclass(frozen=True)
class LineImage:
    """Single-variable image ``sum c * k! * z / (z - pole)**(k+1)`` in ``var``."""

    var: str
    terms: tuple  # of (coeff, fact, pole)

    def __call__(self, z):
        return sum(
            (c * math.factorial(k) * z / (z - a) ** (k + 1) for c, k, a in self.terms), 0j
        )


def single_ara_x(e: Expression) -> LineImage:
    """Conformable ARA transform in x of an expression free of T."""
    if ex.depends_on(e, "T"):
        raise NotSeparable("expression depends on T")
    return LineImage("r", tuple((t.coeff, t.xpow, t.xexp) for t in e.terms))


def single_ara_t(e: Expression) -> LineImage:
    """Conformable ARA transform in t of an expression free of X."""
    if ex.depends_on(e, "X"):
        raise NotSeparable("expression depends on X")
    return LineImage("s", tuple((t.coeff, t.tpow, t.texp) for t in e.terms))


# -- partial-fraction normal form -----------------------------------------


@dataclass(frozen=True)
class _Frac:
    """``coeff * (r - rpole)**(-rord) * (s - spole)**(-sord)``.

    A non-positive order is a plain power of the variable and then the
    pole is always 0, which keeps the representation unique.
    """

    coeff: complex
    rord: int
    sord: int
    rpole: complex
    spole: complex

    def key(self):
        return (self.rord, self.sord, self.rpole, self.spole)

    @classmethod
    def from_key(cls, coeff, key):
        return cls(complex(coeff), *key)


def _factor_expand(k: int, a: complex):
    """``z / (z - a)**(k+1)`` as [(order, pole, weight)]."""
    out = [(k, a if k > 0 else 0j, 1.0)]
    if a != 0:
        out.append((k + 1, a, a))
    return out


def _times_z(order: int, pole: complex):
    """``z * (z - pole)**(-order)`` as [(order, pole, weight)]."""
    if order <= 0:
        return [(order - 1, 0j, 1.0)]
    out = [(order - 1, pole if order > 1 else 0j, 1.0)]
    if pole != 0:
        out.append((order, pole, pole))
    return out


def _deriv(order: int, pole: complex):
    """d/dz of ``(z - pole)**(-order)``."""
    if order == 0:
        return []
    if order < 0:
        return [(order + 1, 0j, -order)]
    return [(order + 1, pole, -order)]


class RationalImage:
    """Rational function of (r, s) in partial-fraction normal form.

    Closed under addition, multiplication by ``r`` or ``s`` and partial
    differentiation, which is all the derivative and boundary identities
    need. Zero is the empty sum, so identities are checked exactly.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[_Frac] = ()):
        self.terms = merge_terms(terms, _Frac.from_key)

    @classmethod
    def from_image(cls, g: ImageExpr) -> "RationalImage":
        out = []
        for t in g.terms:
            c = t.coeff * math.factorial(t.xfact) * math.factorial(t.tfact)
            for ro, rp, rw in _factor_expand(t.xfact, t.xpole):
                for so, sp, sw in _factor_expand(t.tfact, t.tpole):
                    out.append(_Frac(c * rw * sw, ro, so, rp, sp))
        return cls(out)

    @classmethod
    def from_line(cls, g: LineImage) -> "RationalImage":
        out = []
        for c, k, a in g.terms:
            c = c * math.factorial(k)
            for o, pole, w in _factor_expand(k, a):
                if g.var == "r":
                    out.append(_Frac(c * w, o, 0, pole, 0j))
                else:
                    out.append(_Frac(c * w, 0, o, 0j, pole))
        return cls(out)

    def __add__(self, other):
        return RationalImage(self.terms + other.terms)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c):
        return RationalImage(_Frac(t.coeff * c, *t.key()) for t in self.terms)

    def times(self, var: str) -> "RationalImage":
        out = []
        for t in self.terms:
            if var == "r":
                for o, pole, w in _times_z(t.rord, t.rpole):
                    out.append(_Frac(t.coeff * w, o, t.sord, pole, t.spole))
            else:
                for o, pole, w in _times_z(t.sord, t.spole):
                    out.append(_Frac(t.coeff * w, t.rord, o, t.rpole, pole))
        return RationalImage(out)

    def diff(self, var: str) -> "RationalImage":
        out = []
        for t in self.terms:
            if var == "r":
                for o, pole, w in _deriv(t.rord, t.rpole):
                    out.append(_Frac(t.coeff * w, o, t.sord, pole, t.spole))
            else:
                for o, pole, w in _deriv(t.sord, t.spole):
                    out.append(_Frac(t.coeff * w, t.rord, o, t.rpole, pole))
        return RationalImage(out)

    def __call__(self, r, s):
        return sum(
            (t.coeff * (r - t.rpole) ** (-t.rord) * (s - t.spole) ** (-t.sord) for t in self.terms),
            0j,
        )

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"RationalImage({list(self.terms)!r})"


# -- identity checks ------------------------------------------------------

THEOREM3_CASES = ("mulX", "mulT", "mulX2", "mulT2", "mulXT")
THEOREM4_CASES = ("dX", "dXX", "dT", "dTT")
THEOREM5_CASES = ("X_dT", "T_dX")


def check_theorem4(e: Expression, which: str) -> RationalImage:
    """Difference between the image of a derivative and its boundary formula.

    Both sides are built symbolically; the zero image means the identity holds.
    """
    G = RationalImage.from_image(double_ara(e))
    if which in ("dX", "dXX"):
        h0 = RationalImage.from_line(single_ara_t(ex.at_X0(e)))
        if which == "dX":
            lhs = double_ara(ex.differentiate(e, "X"))
            rhs = G.times("r") - h0.times("r")
        else:
            hx0 = RationalImage.from_line(single_ara_t(ex.at_X0(ex.differentiate(e, "X"))))
            lhs = double_ara(ex.differentiate(ex.differentiate(e, "X"), "X"))
            rhs = G.times("r").times("r") - h0.times("r").times("r") - hx0.times("r")
    elif which in ("dT", "dTT"):
        h0 = RationalImage.from_line(single_ara_x(ex.at_T0(e)))
        if which == "dT":
            lhs = double_ara(ex.differentiate(e, "T"))
            rhs = G.times("s") - h0.times("s")
        else:
            ht0 = RationalImage.from_line(single_ara_x(ex.at_T0(ex.differentiate(e, "T"))))
            lhs = double_ara(ex.differentiate(ex.differentiate(e, "T"), "T"))
            rhs = G.times("s").times("s") - h0.times("s").times("s") - ht0.times("s")
    else:
        raise ValueError(f"unknown case {which!r}; expected one of {THEOREM4_CASES}")
    return RationalImage.from_image(lhs) - rhs


def _panel_residual(lhs: Callable, rhs: Callable, panel) -> float:
    worst = 0.0
    for r, s in panel:
        a, b = lhs(r, s), rhs(r, s)
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return worst


def _derivatives(e: Expression):
    G = RationalImage.from_image(double_ara(e))
    Gr, Gs = G.diff("r"), G.diff("s")
    return G, Gr, Gs, Gr.diff("r"), Gs.diff("s"), Gr.diff("s")


def check_theorem3(e: Expression, which: str, panel: Sequence = DEFAULT_PANEL) -> float:
    """Max relative residual of the multiplication-by-coordinate identities."""
    G, Gr, Gs, Grr, Gss, Grs = _derivatives(e)
    factors = {
        "mulX": ex.X,
        "mulT": ex.T,
        "mulX2": ex.xpow_n(2),
        "mulT2": ex.tpow_m(2),
        "mulXT": ex.X * ex.T,
    }
    if which not in factors:
        raise ValueError(f"unknown case {which!r}; expected one of {THEOREM3_CASES}")
    lhs = double_ara(factors[which] * e)

    def rhs(r, s):
        g, gr, gs = G(r, s), Gr(r, s), Gs(r, s)
        if which == "mulX":
            return -gr + g / r
        if which == "mulT":
            return -gs + g / s
        if which == "mulX2":
            return Grr(r, s) - 2 * gr / r + 2 * g / r**2
        if which == "mulT2":
            return Gss(r, s) - 2 * gs / s + 2 * g / s**2
        return Grs(r, s) - gr / s - gs / r + g / (r * s)

    return _panel_residual(lhs, rhs, panel)


def check_theorem5(e: Expression, which: str, panel: Sequence = DEFAULT_PANEL) -> float:
    """Max relative residual of the mixed coordinate-times-derivative identities."""
    G = RationalImage.from_image(double_ara(e))
    if which == "X_dT":
        lhs = double_ara(ex.X * ex.differentiate(e, "T"))
        H0 = RationalImage.from_line(single_ara_x(ex.at_T0(e)))
        var = "r"
    elif which == "T_dX":
        lhs = double_ara(ex.T * ex.differentiate(e, "X"))
        H0 = RationalImage.from_line(single_ara_t(ex.at_X0(e)))
        var = "s"
    else:
        raise ValueError(f"unknown case {which!r}; expected one of {THEOREM5_CASES}")
    Gd, Hd = G.diff(var), H0.diff(var)

    def rhs(r, s):
        z = r if var == "r" else s
        # d/dz (F / z) = F_z / z - F / z**2
        dG = Gd(r, s) / z - G(r, s) / z**2
        dH = Hd(r, s) / z - H0(r, s) / z**2
        return -r * s * dG + r * s * dH

    return _panel_residual(lhs, rhs, panel)


def check_time_integration(f: Expression, panel: Sequence = DEFAULT_PANEL) -> float:
    """Residual of ``image(int_0^T f) == image(f) / s`` on a panel."""
    lhs = double_ara(ex.integrate_T(f))
    g = double_ara(f)
    return _panel_residual(lhs, lambda r, s: g(r, s) / s, panel)


def check_separability(f: Expression, g: Expression, panel: Sequence = DEFAULT_PANEL) -> float:
    """Residual of the product rule for ``f(X) * g(T)``."""
    lhs = double_ara(f * g)
    fr, gs = single_ara_x(f), single_ara_t(g)
    return _panel_residual(lhs, lambda r, s: fr(r) * gs(s), panel)


# -- quadrature oracle ----------------------------------------------------


@dataclass(frozen=True)
class QuadratureConfig:
    """Gauss-Laguerre node count per axis and required abscissa margin."""

    node_count: int = 64
    abscissa_margin: float = 0.5

    def __post_init__(self):
        if self.node_count < 8:
            raise ValueError("node_count must be at least 8")
        if not self.abscissa_margin > 0:
            raise ValueError("abscissa_margin must be positive")


@lru_cache(maxsize=8)
def _laguerre(n: int):
    return np.polynomial.laguerre.laggauss(n)


def exponential_order(e: Expression):
    """Largest real parts of the X and T exponents (0 for polynomial growth)."""
    gx = max([0.0] + [t.xexp.real for t in e.terms])
    gt = max([0.0] + [t.texp.real for t in e.terms])
    return gx, gt


def expression_field(e: Expression, params: FracParams = FracParams()):
    """Physical field ``(x, t) -> e(x**p/p, t**q/q)`` with complex values."""

    def h(x, t):
        X, T = to_stretched(x, t, params)
        return ex.value(e, X, T)

    return h


def numeric_double_ara(
    h,
    r: complex,
    s: complex,
    params: FracParams = FracParams(),
    cfg: QuadratureConfig = QuadratureConfig(),
    orders=(0.0, 0.0),
) -> complex:
    """Double transform of a physical field by Gauss-Laguerre quadrature.

    ``h(x, t)`` must broadcast over numpy arrays. ``orders`` are the
    exponential growth rates of ``h`` in the stretched variables; the real
    parts of ``r`` and ``s`` must exceed them by ``cfg.abscissa_margin``.
    The real parts of ``r`` and ``s`` go into the Laguerre weight, the
    imaginary parts stay in the integrand as an oscillatory factor.
    """
    r, s = complex(r), complex(s)
    gx, gt = orders
    if r.real - gx < cfg.abscissa_margin or s.real - gt < cfg.abscissa_margin:
        raise AbscissaError(
            f"(r, s) = ({r}, {s}) within {cfg.abscissa_margin} of growth orders {orders}"
        )
    y, w = _laguerre(cfg.node_count)
    u = y / r.real
    v = y / s.real
    x, t = from_stretched(u, v, params)
    H = np.asarray(h(x[:, None], t[None, :]), dtype=complex)
    wu = w * np.exp(-1j * r.imag * u)
    wv = w * np.exp(-1j * s.imag * v)
    return complex((r / r.real) * (s / s.real) * (wu @ H @ wv))
