"""Scalar geometry of thin hyperbolic tubes around a short closed geodesic.

A geodesic of length ``ell <= EPS0`` has an embedded collar of half-width
``L = arsinh(1/sinh(ell/2))``; the collar is conformally a flat cylinder
``[-m, m] x S^1`` of circumference ``2*pi`` with ``m = 2*pi*arctan(sinh L)/ell``.
Everything here is a closed-form function of ``ell``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from .errors import DomainError

# Two-sided Margulis-type cutoff for "short": 2*arsinh(1) = 2*log(1+sqrt(2)).
EPS0 = 2.0 * math.asinh(1.0)

# Below this core length e^{-m} underflows in 64-bit arithmetic; results are
# still returned but bound values degenerate to exact zeros.
ELL_PRECISION_FLOOR = 1e-4

_ELL_SLACK = 1e-12


def check_core_length(ell: float) -> float:
    """Validate a core length, warning when it is below the precision floor."""
    if not (0.0 < ell <= EPS0 + _ELL_SLACK):
        raise DomainError(f"core length must lie in (0, {EPS0:.12g}], got {ell!r}")
    if ell < ELL_PRECISION_FLOOR:
        warnings.warn(
            f"core length {ell:g} is below {ELL_PRECISION_FLOOR:g}; exponential "
            "collar quantities underflow in double precision",
            RuntimeWarning,
            stacklevel=3,
        )
    return float(ell)


def collar_width(ell: float) -> float:
    """Half-width L = arsinh(1/sinh(ell/2)) of the embedded collar."""
    ell = check_core_length(ell)
    return math.asinh(1.0 / math.sinh(0.5 * ell))


def flat_halfwidth(ell: float) -> float:
    """Flat half-width m = 2*pi*arctan(sinh L)/ell of the conformal cylinder."""
    ell = check_core_length(ell)
    return 2.0 * math.pi * math.atan(math.sinh(collar_width(ell))) / ell


def injectivity_profile(ell: float, d: float) -> float:
    """Injectivity radius arsinh(sinh(ell/2)*cosh(L-d)) at distance d from the boundary."""
    ell = check_core_length(ell)
    L = collar_width(ell)
    if not (-_ELL_SLACK <= d <= L + _ELL_SLACK):
        raise DomainError(f"distance {d!r} outside the collar [0, {L:.12g}]")
    return math.asinh(math.sinh(0.5 * ell) * math.cosh(L - d))


def boundary_length(ell: float) -> float:
    """Length ell*cosh(L) of each collar boundary circle; lies in [2, 2.5]."""
    ell = check_core_length(ell)
    return ell * math.cosh(collar_width(ell))


def alpha_distance_for_length(ell: float, target_length: float) -> float:
    """Distance d from the boundary at which the equidistant circle has the given length.

    Solves ell*cosh(L-d) = target_length in closed form, d = L - arcosh(target/ell).
    """
    ell = check_core_length(ell)
    L = collar_width(ell)
    if not (ell - _ELL_SLACK <= target_length <= boundary_length(ell) + _ELL_SLACK):
        raise DomainError(
            f"target length {target_length!r} not attainable inside the collar"
        )
    return L - math.acosh(max(1.0, target_length / ell))


@dataclass(frozen=True)
class TubeParams:
    """Scalar data of one thin tube: core length, collar width, flat half-width, modulus."""

    ell: float
    L: float
    m: float
    modulus: float

    @classmethod
    def from_core_length(cls, ell: float) -> "TubeParams":
        ell = check_core_length(ell)
        L = collar_width(ell)
        m = flat_halfwidth(ell)
        return cls(ell=ell, L=L, m=m, modulus=m / math.pi)


@dataclass(frozen=True)
class AnnulusSpec:
    """Round annulus {inner <= |w| <= outer} in the plane, 0 < inner < outer."""

    inner: float
    outer: float

    def __post_init__(self) -> None:
        if not (0.0 < self.inner < self.outer):
            raise DomainError(
                f"degenerate annulus: inner={self.inner!r}, outer={self.outer!r}"
            )

    @property
    def modulus(self) -> float:
        return math.log(self.outer / self.inner) / (2.0 * math.pi)


def annulus_radii(ell: float, L: float) -> AnnulusSpec:
    """Round annulus carved out by the symmetric developing map on the L-collar.

    The image of the sector {arcsin(1/cosh L) <= arg z <= pi - arcsin(1/cosh L)}
    under z -> z^(2*pi*i/ell) is the annulus with log-radii
    ``-(2*pi/ell)*arcsin(1/cosh L)`` (outer) and
    ``-2*pi^2/ell + (2*pi/ell)*arcsin(1/cosh L)`` (inner); orientation is
    normalized so that inner < outer.
    """
    if ell <= 0.0 or L <= 0.0:
        raise DomainError("ell and L must be positive")
    theta = math.asin(1.0 / math.cosh(L))
    log_outer = -(2.0 * math.pi / ell) * theta
    log_inner = -2.0 * math.pi**2 / ell + (2.0 * math.pi / ell) * theta
    if log_inner >= log_outer:
        raise DomainError("degenerate annulus: collar too shallow")
    return AnnulusSpec(inner=math.exp(log_inner), outer=math.exp(log_outer))


def symmetric_developing_map(ell: float):
    """Developing map z -> z^(2*pi*i/ell) of the symmetric tube, as a PowerMap."""
    from .halfplane import PowerMap

    ell = check_core_length(ell)
    return PowerMap(2.0j * math.pi / ell)


def symmetric_schwarzian_coefficient(ell: float, z: complex) -> complex:
    """Schwarzian coefficient (1/(2 z^2))*(1 + 4*pi^2/ell^2) of the symmetric tube."""
    ell = check_core_length(ell)
    return (1.0 + 4.0 * math.pi**2 / ell**2) / (2.0 * z * z)


def symmetric_inverse_schwarzian_coefficient(ell: float, w: complex) -> complex:
    """Schwarzian coefficient (1/(2 w^2))*(1 + ell^2/(4*pi^2)) of the inverse map.

    Sign pinned by the cocycle S(f^-1)(f(z)) f'(z)^2 + S(f)(z) = 0, or
    directly from w -> w^(1/alpha): (1 - 1/alpha^2)/(2 w^2) with
    alpha = 2*pi*i/ell.
    """
    ell = check_core_length(ell)
    return (1.0 + ell**2 / (4.0 * math.pi**2)) / (2.0 * w * w)
