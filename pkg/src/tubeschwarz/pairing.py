"""Pairing integrals along the core and the three-term norm decomposition.

For a holomorphic quadratic differential q dz^2 and the unit-speed core
gamma(t) = i e^t, t in [0, ell], the pairings with the infinitesimal
earthquake mu and grafting nu reduce to core line integrals:

    <q dz^2, mu> = -(1/2) Int Re(q (i gamma', gamma')) dt ,
    <q dz^2, nu> = -(1/2) Int Re(q (gamma', gamma')) dt .

The corresponding norms of the Osgood-Stowe tensor split into three terms
along the conformal chain hyperbolic -> rotationally flat -> ambient flat,
measured by `term_b1`, `term_b2`, `term_b3`; their totals are controlled by
the closed forms in `total_bounds`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .collar import (
    W_CAP,
    collar_decay_factor,
    core_stretch_bound,
    exp_neg_halfwidth,
    stretch_energy_coeff,
)
from .errors import DomainError
from .fourier import FourierHarmonic, strip_velocity_deviation
from .halfplane import QuadraticDifferential
from .osgood import ScalarField, SymTensor2, TubeHyperbolicMetric, os_tensor
from .tube import check_core_length, flat_halfwidth


@dataclass(frozen=True)
class CoreCurve:
    """Core geodesic in its unit-speed hyperbolic parameterization.

    In the half-plane chart gamma(t) = i e^t with tangent i e^t; in the flat
    cylinder chart the same curve reads (0, 2 pi t/ell) and the tangent has
    euclidean length 2 pi/ell.  The parameter interval [0, ell] never changes
    between charts.
    """

    ell: float
    chart: str = "halfplane"

    def point(self, t: float) -> complex:
        return 1j * cmath.exp(t)

    def velocity(self, t: float) -> complex:
        return 1j * cmath.exp(t)


@dataclass(frozen=True)
class PairingResult:
    earthquake_value: float
    grafting_value: float
    quadrature_error_estimate: float


def _pair(q: QuadraticDifferential, core: CoreCurve, rotate: bool, n: int) -> float:
    t = np.arange(n) * core.ell / n
    vals = np.empty(n)
    for i, ti in enumerate(t):
        z = core.point(ti)
        v = core.velocity(ti)
        w = 1j * v if rotate else v
        vals[i] = (q(z) * w * v).real
    return -0.5 * float(vals.mean()) * core.ell


def pair_earthquake(q: QuadraticDifferential, core: CoreCurve, n: int = 256) -> float:
    """-(1/2) Int_0^ell Re(q (i gamma', gamma')) dt by periodic trapezoid rule."""
    return _pair(q, core, rotate=True, n=n)


def pair_grafting(q: QuadraticDifferential, core: CoreCurve, n: int = 256) -> float:
    """-(1/2) Int_0^ell Re(q (gamma', gamma')) dt by periodic trapezoid rule."""
    return _pair(q, core, rotate=False, n=n)


def pair_schwarzian(q: QuadraticDifferential, core: CoreCurve, n: int = 256) -> PairingResult:
    """Both pairings plus a Richardson error estimate from node doubling."""
    eq, gr = pair_earthquake(q, core, n), pair_grafting(q, core, n)
    eq2, gr2 = pair_earthquake(q, core, 2 * n), pair_grafting(q, core, 2 * n)
    return PairingResult(
        earthquake_value=eq2,
        grafting_value=gr2,
        quadrature_error_estimate=max(abs(eq - eq2), abs(gr - gr2)),
    )


# ---------------------------------------------------------------------------
# Three-term decomposition along the core


@dataclass(frozen=True)
class TermEstimate:
    """Measured core norms of one decomposition term against its closed-form bounds.

    The signed values (before the outer absolute value of the norm) are kept
    so term totals can be formed without sign loss.
    """

    norm_eq: float
    bound_eq: float
    norm_gr: float
    bound_gr: float
    eq_signed: float = 0.0
    gr_signed: float = 0.0


def _rotational_factor_field(ell: float) -> ScalarField:
    """u0(rho, theta) = log(2 pi/(ell cosh rho)), the hyperbolic-to-flat factor."""

    def value(rho, theta):
        return math.log(2.0 * math.pi / (ell * math.cosh(rho)))

    def grad(rho, theta):
        return (-math.tanh(rho), 0.0)

    def hess(rho, theta):
        return (-1.0 / math.cosh(rho) ** 2, 0.0, 0.0)

    return ScalarField(value, grad, hess, chart="rhotheta")


def term_b1(ell: float, n: int = 256) -> tuple[float, float]:
    """Core norms (earthquake, grafting) of the rotational term: exactly (0, ell/4).

    Evaluated by actual quadrature of the Osgood-Stowe tensor of u0 in the
    collar chart, where the unit tangent is (2 pi/ell) d_theta and its
    rotation by i is -d_rho.
    """
    ell = check_core_length(ell)
    u0 = _rotational_factor_field(ell)
    g = TubeHyperbolicMetric(ell)
    c = 2.0 * math.pi / ell
    t = np.arange(n) * ell / n
    vals_eq = np.empty(n)
    vals_gr = np.empty(n)
    for i, ti in enumerate(t):
        p = (0.0, c * ti)
        b = os_tensor(g, u0, p)
        vals_eq[i] = -1.0 * c * b.t12          # B(i gamma', gamma'), i gamma' = (-1, 0)
        vals_gr[i] = c * c * b.t22
    norm_eq = abs(0.5 * vals_eq.mean() * ell)
    norm_gr = abs(0.5 * vals_gr.mean() * ell)
    return norm_eq, norm_gr


def term_b2(
    fh: FourierHarmonic, ell: float, w: float = W_CAP, n: int = 256,
    core_partials=None,
) -> TermEstimate:
    """Core norms of the flat-factor term and their decay bounds.

    In the flat chart the tensor entries are polynomial in the partials of
    the harmonic factor (no Christoffel terms), so the quadrature vectorizes;
    `os_tensor` with the same field reproduces it pointwise (tested).
    """
    ell = check_core_length(ell)
    if core_partials is None:
        core_partials = fh.core_partials(n)
    _, u_r, u_t, u_rr, u_rt, u_tt = core_partials
    b12 = u_rt - u_t * u_r
    b22 = 0.5 * u_tt - 0.5 * u_rr + 0.5 * u_r**2 - 0.5 * u_t**2
    c = 2.0 * math.pi / ell
    signed_eq = 0.5 * float((-c * c * b12).mean()) * ell
    signed_gr = 0.5 * float((c * c * b22).mean()) * ell
    q = exp_neg_halfwidth(ell)
    return TermEstimate(
        norm_eq=abs(signed_eq),
        bound_eq=113.0 * math.pi**2 * q / ell,
        norm_gr=abs(signed_gr),
        bound_gr=18.0 * math.pi**2 * q / ell,
        eq_signed=signed_eq,
        gr_signed=signed_gr,
    )


@dataclass(frozen=True)
class AmbientTermEstimate:
    """Measured core norms of the ambient-flat term (the -1/2 dw^2 piece).

    `gr_center_offset` is the grafting norm minus its center pi^2/ell,
    computed directly from the velocity deviation so it stays accurate when
    exponentially small; `eq_signed` is the signed earthquake value.
    """

    norm_eq: float
    bound_eq: float
    norm_gr: float
    bound_gr: float
    eq_signed: float
    gr_center_offset: float
    deviation_sq_integral: float


def term_b3(
    fh: FourierHarmonic, ell: float, w: float = W_CAP, n: int = 512
) -> AmbientTermEstimate:
    """Core norms of the ambient term via development into the flat strip.

    With gammadot_w the developed velocity and gbar its mean (2 pi/ell) i,
    the earthquake value is (1/4) Im Int gammadot_w^2 ds and the grafting
    value is pi^2/ell - (1/4) Re Int (gammadot_w - gbar)^2 ds; the linear
    cross term integrates to zero exactly because gbar is the quadrature
    mean, so it is dropped rather than summed through roundoff.
    """
    ell = check_core_length(ell)
    deviation, _, ds = strip_velocity_deviation(fh, ell, n=n)
    i2 = complex((deviation**2).sum() * ds)
    center = math.pi**2 / ell
    eq_signed = 0.25 * i2.imag
    gr_offset = -0.25 * i2.real
    sigma = collar_decay_factor(ell)
    g = core_stretch_bound(ell, w)
    return AmbientTermEstimate(
        norm_eq=abs(eq_signed),
        bound_eq=8.0 * math.pi**4 * w**2 * g**2 * sigma**2 / ell,
        norm_gr=abs(center + gr_offset),
        bound_gr=center + 8.0 * math.pi**4 * stretch_energy_coeff(ell, w)
        * math.exp(-math.pi**2 / ell) / ell,
        eq_signed=eq_signed,
        gr_center_offset=gr_offset,
        deviation_sq_integral=float((np.abs(deviation) ** 2).sum() * ds),
    )


def total_bounds(ell: float, w: float = W_CAP) -> tuple[float, float, float]:
    """(earthquake bound, grafting center, grafting bound) for the full norm.

    earthquake: 8 pi^4 Gbar e^{-pi^2/ell}/ell + 113 pi^2 e^{-pi^2/(2 ell)}/ell;
    grafting:   pi^2/ell + ell/4 + 8 pi^4 Gbar e^{-pi^2/ell}/ell
                + 18 pi^2 e^{-pi^2/(2 ell)}/ell.
    """
    ell = check_core_length(ell)
    gbar = stretch_energy_coeff(ell, w)
    tail_full = 8.0 * math.pi**4 * gbar * math.exp(-math.pi**2 / ell) / ell
    tail_half = math.exp(-math.pi**2 / (2.0 * ell)) / ell
    eq_bound = tail_full + 113.0 * math.pi**2 * tail_half
    gr_center = math.pi**2 / ell
    gr_bound = gr_center + 0.25 * ell + tail_full + 18.0 * math.pi**2 * tail_half
    return eq_bound, gr_center, gr_bound


def grafting_remainder_bound(ell: float, w: float = W_CAP) -> float:
    """The grafting bound minus its center pi^2/ell + ell/4 (the decay tail)."""
    eq_bound, gr_center, gr_bound = total_bounds(ell, w)
    gbar = stretch_energy_coeff(ell, w)
    return (
        8.0 * math.pi**4 * gbar * math.exp(-math.pi**2 / ell) / ell
        + 18.0 * math.pi**2 * math.exp(-math.pi**2 / (2.0 * ell)) / ell
    )


def zero_harmonic(ell: float) -> FourierHarmonic:
    """The trivial flat factor of the symmetric tube (u1 = 0)."""
    return FourierHarmonic(
        m=flat_halfwidth(ell), c0=0.0, c1=0.0,
        v1=np.zeros(1, dtype=complex), v2=np.zeros(1, dtype=complex),
    )


class DecompositionResidual(NamedTuple):
    earthquake: float
    grafting: float


def decomposition_residual_symmetric(ell: float, n: int = 256) -> DecompositionResidual:
    """Additivity check for the symmetric tube: pairing of the symmetric
    Schwarzian along the core against the term sum (the flat term vanishes)."""
    from .tube import symmetric_schwarzian_coefficient

    ell = check_core_length(ell)
    q = QuadraticDifferential(lambda z: symmetric_schwarzian_coefficient(ell, z))
    core = CoreCurve(ell)
    lhs_eq = abs(pair_earthquake(q, core, n))
    lhs_gr = abs(pair_grafting(q, core, n))
    b1_eq, b1_gr = term_b1(ell, n)
    b3 = term_b3(zero_harmonic(ell), ell, n=n)
    return DecompositionResidual(
        earthquake=abs(lhs_eq - (b1_eq + b3.norm_eq)),
        grafting=abs(lhs_gr - (b1_gr + b3.norm_gr)),
    )
