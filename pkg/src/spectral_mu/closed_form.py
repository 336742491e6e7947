"""Mesh-free spectra for balls and unions of two disjoint balls.

Everything here follows from j_{n/2-1,1} and omega_n. The twisted value
lambda_T of a single ball, or of two unequal balls, has no closed form and is
passed in by the caller (typically from :mod:`spectral_mu.variational`).
"""
from __future__ import annotations

from dataclasses import dataclass

from .special import dimension_constants

ONE_BALL = "one-ball-linear"
TWO_BALLS = "two-equal-balls-flat"

__all__ = [
    "ONE_BALL",
    "TWO_BALLS",
    "BallUnionSpec",
    "EnvelopeValue",
    "lambda_ball",
    "faber_krahn_value",
    "lambda_dirichlet_two_balls",
    "two_equal_balls_value",
    "alpha_critical",
    "mu_single_ball",
    "mu_two_balls",
    "theorem_envelope",
    "scaling_transport",
    "alpha_transport",
    "ball_radius_for_measure",
]


def _check_dimension(n):
    if int(n) != n or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")


def _check_measure(measure):
    if not measure > 0:
        raise ValueError(f"measure must be positive, got {measure!r}")


@dataclass(frozen=True)
class BallUnionSpec:
    """A ball (``r2 == 0``) or a union of two disjoint balls in R^n."""

    n: int
    r1: float
    r2: float = 0.0

    def __post_init__(self):
        _check_dimension(self.n)
        if not self.r1 > 0:
            raise ValueError(f"r1 must be positive, got {self.r1!r}")
        if not (0 <= self.r2 <= self.r1):
            raise ValueError(f"need r1 >= r2 >= 0, got r1={self.r1!r}, r2={self.r2!r}")

    @property
    def measure(self) -> float:
        omega = dimension_constants(self.n).omega_n
        return omega * (self.r1 ** self.n + self.r2 ** self.n)

    @property
    def is_single_ball(self) -> bool:
        return self.r2 == 0

    @property
    def is_equal_pair(self) -> bool:
        return self.r2 == self.r1

    def scaled(self, t: float) -> "BallUnionSpec":
        if not t > 0:
            raise ValueError(f"scale factor must be positive, got {t!r}")
        return BallUnionSpec(self.n, t * self.r1, t * self.r2)

    @classmethod
    def equal_pair(cls, n: int, measure: float) -> "BallUnionSpec":
        """Two disjoint balls of measure ``measure / 2`` each."""
        r = ball_radius_for_measure(n, measure / 2.0)
        return cls(n, r, r)

    @classmethod
    def from_fraction(cls, n: int, measure: float, fraction: float) -> "BallUnionSpec":
        """Split ``measure`` into balls of measure ``fraction`` and ``1 - fraction``."""
        if not 0.5 <= fraction <= 1.0:
            raise ValueError(f"fraction must lie in [1/2, 1], got {fraction!r}")
        r1 = ball_radius_for_measure(n, fraction * measure)
        rest = (1.0 - fraction) * measure
        r2 = ball_radius_for_measure(n, rest) if rest > 0 else 0.0
        return cls(n, r1, min(r2, r1))


@dataclass(frozen=True)
class EnvelopeValue:
    alpha: float
    value: float
    branch: str


def ball_radius_for_measure(n: int, measure: float) -> float:
    _check_dimension(n)
    _check_measure(measure)
    return (measure / dimension_constants(n).omega_n) ** (1.0 / n)


def lambda_ball(n: int, r: float) -> float:
    """First Dirichlet eigenvalue j^2 / r^2 of a ball of radius r."""
    _check_dimension(n)
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r!r}")
    j = dimension_constants(n).j_first
    return j * j / (r * r)


def faber_krahn_value(n: int, measure: float) -> float:
    """lambda of the ball with the given measure: omega^{2/n} j^2 / |Omega|^{2/n}."""
    _check_dimension(n)
    _check_measure(measure)
    c = dimension_constants(n)
    return (c.omega_n / measure) ** (2.0 / n) * c.j_first ** 2


def two_equal_balls_value(n: int, measure: float) -> float:
    """2^{2/n} omega^{2/n} j^2 / |Omega|^{2/n}, the value on two balls of measure |Omega|/2."""
    return 2.0 ** (2.0 / n) * faber_krahn_value(n, measure)


def lambda_dirichlet_two_balls(spec: BallUnionSpec) -> float:
    # The larger ball carries the ground state; the smaller one is irrelevant.
    return lambda_ball(spec.n, spec.r1)


def alpha_critical(n: int) -> float:
    """Threshold j^2 omega^{2/n} (2^{2/n} - 1) for alpha |Omega|^{2/n}."""
    _check_dimension(n)
    c = dimension_constants(n)
    return c.j_first ** 2 * c.omega_n ** (2.0 / n) * (2.0 ** (2.0 / n) - 1.0)


def _piecewise(lam: float, alpha: float, lambda_T: float) -> float:
    if lambda_T < lam * (1 - 1e-12):
        raise ValueError(
            f"twisted value {lambda_T!r} lies below the Dirichlet value {lam!r}"
        )
    if alpha <= lambda_T - lam:
        return lam + alpha
    return lambda_T


def mu_single_ball(n: int, r: float, alpha: float, lambda_T_ball: float) -> float:
    """mu on one ball: lambda + alpha up to the kink, then the twisted plateau."""
    return _piecewise(lambda_ball(n, r), alpha, lambda_T_ball)


def mu_two_balls(spec: BallUnionSpec, alpha: float, lambda_T_union: float | None = None) -> float:
    """mu on a union of two balls.

    For equal radii the twisted value coincides with the Dirichlet value, so
    ``lambda_T_union`` may be omitted and the curve is flat for alpha >= 0.
    """
    lam = lambda_dirichlet_two_balls(spec)
    if spec.is_equal_pair:
        if lambda_T_union is None:
            lambda_T_union = lam
        if alpha >= 0:
            return lam
    elif lambda_T_union is None:
        raise ValueError("lambda_T_union is required unless the radii are equal")
    return _piecewise(lam, alpha, lambda_T_union)


def theorem_envelope(n: int, measure: float, alpha: float) -> EnvelopeValue:
    """Sharp lower bound of mu(Omega, alpha) over sets of the given measure.

    One ball wins while ``alpha * measure**(2/n) <= alpha_critical(n)``
    (ties are tagged one-ball); two equal balls win beyond. For negative alpha
    the bound is ``faber_krahn_value + alpha``.
    """
    _check_dimension(n)
    _check_measure(measure)
    scaled = alpha * measure ** (2.0 / n)
    if scaled <= alpha_critical(n):
        return EnvelopeValue(alpha, faber_krahn_value(n, measure) + alpha, ONE_BALL)
    return EnvelopeValue(alpha, two_equal_balls_value(n, measure), TWO_BALLS)


def scaling_transport(mu_value: float, t: float) -> float:
    """mu(t Omega; alpha) = t^-2 mu(Omega; t^2 alpha): the t^-2 factor."""
    if not t > 0:
        raise ValueError(f"scale factor must be positive, got {t!r}")
    return mu_value / (t * t)


def alpha_transport(alpha: float, t: float) -> float:
    """The t^2 alpha argument on the right of the scaling law."""
    if not t > 0:
        raise ValueError(f"scale factor must be positive, got {t!r}")
    return alpha * t * t

