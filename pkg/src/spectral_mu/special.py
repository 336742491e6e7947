"""Bessel functions of the first kind, their first zeros and unit-ball volumes.

Only what the closed forms need: J_nu(x) for real nu >= 0 and 0 <= x, the
first positive zero j_{nu,1}, and omega_n = pi^{n/2} / Gamma(n/2 + 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext

__all__ = [
    "BesselOrder",
    "DimensionConstants",
    "bessel_j",
    "first_bessel_zero",
    "gamma",
    "unit_ball_volume",
    "dimension_constants",
]

# Largest x for which the double-precision series is trusted. Beyond this the
# partial sums overshoot |J| by many orders of magnitude and cancellation
# eats the accuracy, so the series is summed with extra decimal digits.
_FLOAT_SERIES_MAX_X = 8.0
_TERM_RTOL = 1e-18


@dataclass(frozen=True)
class BesselOrder:
    nu: float

    def __post_init__(self):
        if not (self.nu >= 0.0):
            raise ValueError(f"Bessel order must be nonnegative, got {self.nu!r}")

    @classmethod
    def for_dimension(cls, n: int) -> "BesselOrder":
        """Order n/2 - 1 attached to the Laplacian in dimension n."""
        if n < 2:
            raise ValueError(f"dimension must be >= 2, got {n}")
        return cls(n / 2.0 - 1.0)


def _as_order(order) -> BesselOrder:
    return order if isinstance(order, BesselOrder) else BesselOrder(float(order))


def gamma(x: float) -> float:
    """Gamma function.

    Integer and half-integer arguments are evaluated by the recursion
    Gamma(x + 1) = x Gamma(x) from Gamma(1) = 1 and Gamma(1/2) = sqrt(pi);
    every other positive argument goes to ``math.gamma``.
    """
    if x <= 0:
        raise ValueError(f"gamma is only provided for positive arguments, got {x!r}")
    twice = 2.0 * x
    if twice == round(twice) and twice <= 340:
        k = int(round(twice))
        if k % 2 == 0:
            value, start = 1.0, 1.0
        else:
            value, start = math.sqrt(math.pi), 0.5
        t = start
        while t < x:
            value *= t
            t += 1.0
        return value
    return math.gamma(x)


def _series_float(nu: float, y: float) -> float:
    # sum_k (-y)^k / (k! (nu+1)_k) with y = x^2/4
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= -y / (k * (k + nu))
        total += term
        if abs(term) <= _TERM_RTOL * abs(total) or (term == 0.0):
            return total
        if k > 500:
            return total


def _series_decimal(nu: float, x: float) -> float:
    # The largest term is about exp(x) / (2 pi x); carry that many extra digits.
    digits = 30 + int(0.5 * x) + 1
    with localcontext() as ctx:
        ctx.prec = digits
        y = (Decimal(x) / 2) ** 2
        dnu = Decimal(nu)
        term = Decimal(1)
        total = Decimal(1)
        eps = Decimal(10) ** (-(digits - 2))
        k = 0
        while True:
            k += 1
            term = -term * y / (k * (k + dnu))
            total += term
            if abs(term) <= eps and k > x:
                break
        return float(total)


def bessel_j(order, x: float) -> float:
    """Bessel function of the first kind J_nu(x) for x >= 0.

    Ascending series with the term recurrence
    t_{k+1} = -t_k (x/2)^2 / ((k+1)(k+1+nu)). For x above 8 the same
    series is summed in extended precision (``decimal``) so the absolute
    error stays near 1e-16; accuracy is tested for x <= 30.
    """
    nu = _as_order(order).nu
    x = float(x)
    if x < 0:
        raise ValueError(f"bessel_j is defined here for x >= 0, got {x!r}")
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    if x <= _FLOAT_SERIES_MAX_X:
        s = _series_float(nu, 0.25 * x * x)
    else:
        s = _series_decimal(nu, x)
    return s * (0.5 * x) ** nu / gamma(nu + 1.0)


def _bisect(f, a: float, b: float, xtol: float) -> float:
    fa = f(a)
    fb = f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise ValueError(f"no sign change on [{a}, {b}]")
    while b - a > xtol:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        if fm == 0.0:
            return m
        if fa * fm < 0:
            b, fb = m, fm
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def _first_zero_bracket(nu: float) -> tuple[float, float]:
    lo, hi = nu + 1.0, nu + 4.0
    if bessel_j(nu, lo) > 0 and bessel_j(nu, hi) < 0:
        return lo, hi
    # J_nu > 0 on (0, j_{nu,1}) and j_{nu,1} > nu: march upward from nu.
    step = 0.25
    a = max(nu, step)
    while bessel_j(nu, a + step) > 0:
        a += step
    return a, a + step


def first_bessel_zero(order) -> float:
    """First positive zero j_{nu,1} of J_nu, by bisection to 1e-13 relative width."""
    nu = _as_order(order).nu
    a, b = _first_zero_bracket(nu)
    return _bisect(lambda t: bessel_j(nu, t), a, b, xtol=1e-13 * b)


def unit_ball_volume(n: int) -> float:
    """Lebesgue measure of the unit ball in R^n."""
    if int(n) != n or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n!r}")
    return math.pi ** (n / 2.0) / gamma(n / 2.0 + 1.0)


@dataclass(frozen=True)
class DimensionConstants:
    n: int
    omega_n: float = field(init=False)
    j_first: float = field(init=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "omega_n", unit_ball_volume(self.n))
        object.__setattr__(self, "j_first", first_bessel_zero(self.n / 2.0 - 1.0))


_CONSTANTS: dict[int, DimensionConstants] = {}


def dimension_constants(n: int) -> DimensionConstants:
    """Cached omega_n and j_{n/2-1,1} for dimension n."""
    if n not in _CONSTANTS:
        _CONSTANTS[n] = DimensionConstants(n)
    return _CONSTANTS[n]
