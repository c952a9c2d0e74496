"""Constants of regular ideal hyperbolic simplices.

Everything is evaluated with mpmath at a caller-chosen number of decimal
digits.  The constants ``eps``, ``a``, ``delta`` and ``eta`` that enter the
gap constant ``C_n`` are only known to exist, so they are always inputs:
``c_const`` is a formula evaluator, not a source of numeric values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath

DEFAULT_DIGITS = 50


class HypError(ValueError):
    pass


def _dps(precision):
    return mpmath.workdps(precision + 10)


def dihedral_angle_regular_ideal(n: int, precision: int = DEFAULT_DIGITS):
    """Ridge dihedral angle ``arccos(1/(n-1))`` of the regular ideal n-simplex."""
    if n < 3:
        raise HypError("dihedral angles are defined for n >= 3")
    with _dps(precision):
        return mpmath.acos(mpmath.mpf(1) / (n - 1))


def k_overlap(n: int, precision: int = DEFAULT_DIGITS) -> int:
    """``floor(2 pi / alpha_n)``, with ``k alpha < 2 pi < (k+1) alpha`` checked.

    For ``n = 3`` the quotient is exactly 6 and the strict window is empty.
    """
    if n < 3:
        raise HypError("k_n is defined for n >= 4")
    if n == 3:
        raise HypError("2*pi/alpha_3 = 6 is an integer; k_3 has no strict window")
    with _dps(precision):
        a = dihedral_angle_regular_ideal(n, precision)
        q = 2 * mpmath.pi / a
        k = int(mpmath.floor(q))
        if not (k * a < 2 * mpmath.pi < (k + 1) * a):
            raise ArithmeticError(f"strict window fails for n = {n}")
        return k


def turn_quotient(n: int, precision: int = DEFAULT_DIGITS):
    """``2 pi / alpha_n`` as a high-precision real."""
    with _dps(precision):
        return 2 * mpmath.pi / dihedral_angle_regular_ideal(n, precision)


def lobachevsky(theta, precision: int = DEFAULT_DIGITS):
    """Lobachevsky function ``-int_0^theta log|2 sin t| dt``.

    Evaluated as half the Clausen function at ``2 theta``, i.e. the sum
    ``(1/2) sum_k sin(2 k theta) / k^2``; mpmath sums it with convergence
    acceleration instead of the slow k^-2 tail.
    """
    with _dps(precision):
        return mpmath.clsin(2, 2 * mpmath.mpf(theta)) / 2


def lobachevsky_by_quadrature(theta, precision: int = DEFAULT_DIGITS):
    """Independent check of ``lobachevsky`` by numerical integration.

    The integrand has logarithmic singularities at multiples of pi, which
    are passed to the quadrature as breakpoints.
    """
    with _dps(precision):
        th = mpmath.mpf(theta)
        lo, hi = (0, th) if th >= 0 else (th, 0)
        pts = [lo] + [j * mpmath.pi for j in range(int(mpmath.floor(lo / mpmath.pi)) + 1,
                                                     int(mpmath.ceil(hi / mpmath.pi)))
                      if lo < j * mpmath.pi < hi] + [hi]
        val = mpmath.quad(lambda t: mpmath.log(abs(2 * mpmath.sin(t))), pts)
        return -val if th >= 0 else val


def regular_ideal_volume(n: int, precision: int = DEFAULT_DIGITS):
    """``v_2 = pi`` and ``v_3 = 3 Lambda(pi/3)``; higher n is not supported."""
    with _dps(precision):
        if n == 2:
            return +mpmath.pi
        if n == 3:
            return 3 * lobachevsky(mpmath.pi / 3, precision)
    raise HypError(f"regular ideal simplex volume is only available for n = 2, 3 (got {n})")


def gromov_thurston_sv(vol, n: int, precision: int = DEFAULT_DIGITS):
    """Simplicial volume of a closed hyperbolic n-manifold from its volume."""
    with _dps(precision):
        vol = mpmath.mpf(vol)
        if vol <= 0:
            raise HypError("volume must be positive")
        return vol / regular_ideal_volume(n, precision)


def ball_volume(n: int, r, precision: int = DEFAULT_DIGITS):
    """Volume of a radius-``r`` ball in hyperbolic n-space."""
    with _dps(precision):
        sphere = 2 * mpmath.pi ** (mpmath.mpf(n) / 2) / mpmath.gamma(mpmath.mpf(n) / 2)
        return sphere * mpmath.quad(lambda t: mpmath.sinh(t) ** (n - 1), [0, r])


@dataclass(frozen=True)
class HypParams:
    n: int
    eps: float | None = None
    a: float | None = None
    delta: float | None = None
    eta: float | None = None
    precision: int = DEFAULT_DIGITS

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise HypError("n must be an integer >= 3")
        for name in ("eps", "a", "delta", "eta"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise HypError(f"{name} must be positive")
        if self.precision < 15:
            raise HypError("precision below 15 digits is not supported")

    def eta_value(self):
        """``eta`` if given, else the volume of the ``delta`` ball, else None."""
        if self.eta is not None:
            return mpmath.mpf(self.eta)
        if self.delta is not None:
            return ball_volume(self.n, self.delta, self.precision)
        return None


@dataclass(frozen=True)
class GapConstant:
    value: mpmath.mpf
    branches: tuple

    def __float__(self):
        return float(self.value)


def c_const(p: HypParams, v=None) -> GapConstant:
    """``max(1 - eps/12, 1 - eta/(3v), 1 - a eta/(2v))`` with each branch kept.

    ``v`` defaults to the regular ideal volume when that is available.
    """
    eta = p.eta_value()
    if p.eps is None or p.a is None or eta is None:
        raise HypError("c_const needs eps, a and eta (or delta)")
    with _dps(p.precision):
        v = regular_ideal_volume(p.n, p.precision) if v is None else mpmath.mpf(v)
        if v <= 0:
            raise HypError("v must be positive")
        branches = (1 - mpmath.mpf(p.eps) / 12,
                    1 - eta / (3 * v),
                    1 - mpmath.mpf(p.a) * eta / (2 * v))
        return GapConstant(max(branches), branches)


@dataclass(frozen=True)
class AngleWindow:
    inside: bool
    regular_inside: bool
    lower: mpmath.mpf
    upper: mpmath.mpf

    def __bool__(self):
        return self.inside


def angle_window_check(n: int, a, alpha, precision: int = DEFAULT_DIGITS) -> AngleWindow:
    """Is ``2pi/(k+1) (1+a) < alpha < 2pi/k (1-a)``?  Also tests the regular angle."""
    if n < 4:
        raise HypError("the angle window is defined for n >= 4")
    with _dps(precision):
        k = k_overlap(n, precision)
        a = mpmath.mpf(a)
        lo = 2 * mpmath.pi / (k + 1) * (1 + a)
        hi = 2 * mpmath.pi / k * (1 - a)
        reg = dihedral_angle_regular_ideal(n, precision)
        alpha = mpmath.mpf(alpha)
        return AngleWindow(bool(lo < alpha < hi), bool(lo < reg < hi), lo, hi)


@dataclass(frozen=True)
class HypReport:
    n: int
    alpha_n: mpmath.mpf
    k_n: int | None
    integer_turn: bool
    v_n: mpmath.mpf | None = None
    c_n: GapConstant | None = None
    window: AngleWindow | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_document(self, digits: int = 30) -> dict:
        s = lambda x: None if x is None else mpmath.nstr(x, digits)
        doc = {"n": self.n, "alpha_n": s(self.alpha_n), "k_n": self.k_n,
               "two_pi_over_alpha_is_integer": self.integer_turn, "v_n": s(self.v_n),
               "notes": list(self.notes)}
        if self.c_n is not None:
            doc["C_n"] = {"value": s(self.c_n.value), "branches": [s(b) for b in self.c_n.branches]}
        if self.window is not None:
            doc["window"] = {"lower": s(self.window.lower), "upper": s(self.window.upper),
                             "regular_inside": self.window.regular_inside}
        return doc


def hyp_report(p: HypParams) -> HypReport:
    notes = []
    alpha = dihedral_angle_regular_ideal(p.n, p.precision)
    k = None if p.n == 3 else k_overlap(p.n, p.precision)
    v = regular_ideal_volume(p.n, p.precision) if p.n <= 3 else None
    if v is None:
        notes.append("v_n is not available for n >= 4")
    c = None
    if p.eps is not None and p.a is not None and p.eta_value() is not None:
        if v is None:
            notes.append("C_n needs v_n")
        else:
            c = c_const(p, v)
    window = angle_window_check(p.n, p.a, alpha, p.precision) if p.a is not None and p.n >= 4 else None
    return HypReport(p.n, alpha, k, p.n == 3, v, c, window, tuple(notes))


def nearest_integer_gap(x) -> float:
    return float(abs(x - mpmath.nint(x)))


__all__ = ["HypParams", "HypReport", "GapConstant", "AngleWindow", "HypError",
           "dihedral_angle_regular_ideal", "k_overlap", "turn_quotient", "lobachevsky",
           "lobachevsky_by_quadrature", "regular_ideal_volume", "gromov_thurston_sv",
           "ball_volume", "c_const", "angle_window_check", "hyp_report", "nearest_integer_gap"]
