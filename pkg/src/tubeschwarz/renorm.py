"""Variation of renormalized volume along earthquake and grafting paths.

Only the variation formulas are computed here; the volume itself needs
three-manifold data far beyond desk scale and is deliberately absent.
The pieces are: the earthquake variation bound, the grafting length
envelopes, the differential coefficient pi/4 + pi^3/ell^2 obtained from
Gardiner's formula, and the pinching asymptotic that integrates it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .collar import W_CAP, core_stretch_bound
from .errors import DomainError
from .report import BoundReport
from .tube import check_core_length


def earthquake_variation_bound(ell: float, t: float, w: float = W_CAP) -> float:
    """Bound 113 pi^2 e^{-pi^2/(2 ell)}/ell * t + 142 pi^4 G(ell)^2 e^{-pi^2/ell}/ell * t
    for the renormalized-volume change along a parameter-t earthquake."""
    ell = check_core_length(ell)
    if t < 0.0:
        raise DomainError("earthquake parameter must be nonnegative")
    g = core_stretch_bound(ell, w)
    return (
        113.0 * math.pi**2 * math.exp(-math.pi**2 / (2.0 * ell)) / ell
        + 142.0 * math.pi**4 * g * g * math.exp(-math.pi**2 / ell) / ell
    ) * t


def grafting_length_bounds(ell0: float, s: float) -> tuple[float, float]:
    """Envelope (upper, lower) = (pi/(pi+s), pi/(2(pi+s))) * ell0 for the core
    length after a parameter-s grafting."""
    ell0 = check_core_length(ell0)
    if s < 0.0:
        raise DomainError("grafting parameter must be nonnegative")
    return (math.pi / (math.pi + s) * ell0, math.pi / (2.0 * (math.pi + s)) * ell0)


def gardiner_coefficient(ell: float) -> float:
    """Coefficient pi/4 + pi^3/ell^2 of d ell in the volume differential."""
    if ell <= 0.0:
        raise DomainError("core length must be positive")
    return 0.25 * math.pi + math.pi**3 / ell**2


def vr_asymptotic(ell0: float, ells: float) -> float:
    """-pi^3/ells + pi^3/ell0 + (ells - ell0) pi/4, the closed antiderivative."""
    if not (0.0 < ells <= ell0):
        raise DomainError("need 0 < ells <= ell0")
    check_core_length(ell0)
    return -math.pi**3 / ells + math.pi**3 / ell0 + (ells - ell0) * 0.25 * math.pi


def integral_identity_residual(ell0: float, ells: float, n: int = 1024) -> float:
    """|Gauss-Legendre integral of the coefficient - the closed antiderivative|."""
    if ells == ell0:
        return 0.0
    if n < 64:
        raise DomainError("need at least 64 quadrature nodes")
    nodes, weights = np.polynomial.legendre.leggauss(n)
    mid, half = 0.5 * (ells + ell0), 0.5 * (ells - ell0)
    u = mid + half * nodes
    integral = half * float(weights @ (0.25 * math.pi + math.pi**3 / u**2))
    return abs(integral - vr_asymptotic(ell0, ells))


@dataclass(frozen=True)
class GraftPathRow:
    """One grafting-path sample: envelopes, asymptotic values, error envelopes."""

    s: float
    ell_upper: float
    ell_lower: float
    vr_delta: float            # at the (asymptotically sharp) upper envelope
    vr_delta_lower: float
    error_envelope: float      # e^{-pi s/(2 ell0)} s^3, unit constant
    error_envelope_integrand: float  # e^{-pi s/(2 ell0)} s^2, pre-integration shape


def vr_path_table(ell0: float, s_max: float, n_rows: int) -> list[GraftPathRow]:
    """Tabulates the grafting path at n_rows equispaced parameters in [0, s_max]."""
    ell0 = check_core_length(ell0)
    if s_max <= 0.0 or n_rows < 1:
        raise DomainError("need s_max > 0 and at least one row")
    rows = []
    for s in np.linspace(0.0, s_max, n_rows):
        upper, lower = grafting_length_bounds(ell0, float(s))
        decay = math.exp(-math.pi * s / (2.0 * ell0))
        rows.append(
            GraftPathRow(
                s=float(s),
                ell_upper=upper,
                ell_lower=lower,
                vr_delta=vr_asymptotic(ell0, upper),
                vr_delta_lower=vr_asymptotic(ell0, lower),
                error_envelope=decay * s**3,
                error_envelope_integrand=decay * s**2,
            )
        )
    return rows


def error_term_transfer_check(ell0: float, s: float) -> BoundReport:
    """Check e^{-pi^2/(2 ells)}/ells^2 <= 4 (pi+s)^2/(pi^2 ell0^2) e^{-pi^2 (pi+s)/(2 pi ell0)}
    with ells taken from the lower grafting envelope."""
    ell0 = check_core_length(ell0)
    if s < 0.0:
        raise DomainError("grafting parameter must be nonnegative")
    ells = grafting_length_bounds(ell0, s)[1]
    lhs = math.exp(-math.pi**2 / (2.0 * ells)) / ells**2
    rhs = (
        4.0 * (math.pi + s) ** 2 / (math.pi**2 * ell0**2)
        * math.exp(-math.pi**2 * (math.pi + s) / (2.0 * math.pi * ell0))
    )
    return BoundReport.check(f"error_transfer_s={s:g}", lhs, rhs)
