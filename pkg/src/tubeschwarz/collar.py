"""Closed-form bound functions controlling the flat conformal factor of a tube.

Naming of the main quantities (all dimensionless):

* ``thurston_factor_bound`` -- b(x) = 2*pi*e^(0.502*pi)*e^(-pi^2/(sqrt(e)*x)),
  an upper bound for the Thurston-to-flat conformal gap along a collar circle
  of flat length x.
* ``boundary_factor_sup`` -- W(ell) = |-b(x) - log(2*pi/x)| at x = boundary
  circle length; the universal cap is W <= 3.7, and the evaluation at the
  curve of length EPS0 gives the sharper core-side cap W0 <= 2.3.
* ``core_stretch_bound`` -- G(ell), a bound for e^u on the core, always in
  [1, e^2.8] and -> 1 as ell -> 0.
* ``stretch_energy_coeff`` -- Gbar(ell) = (W*G(ell)*(16/15)^2)^2 <= 17.73*G^2,
  the coefficient of the e^(-pi^2/ell) remainder.
"""

from __future__ import annotations

import math

from .errors import DomainError
from .report import BoundReport
from .tube import EPS0, boundary_length, check_core_length, flat_halfwidth

W_CAP = 3.7
W0_CAP = 2.3
CORE_SUP_CAP = 2.8
STRETCH_CAP = math.exp(2.8)


def exp_neg_halfwidth(ell: float) -> float:
    """e^(-m(ell)); underflows to exact zero for very small ell (documented)."""
    return math.exp(-flat_halfwidth(ell))


def collar_decay_factor(ell: float) -> float:
    """sigma = e^m/(e^m - 1)^2, evaluated stably as e^(-m)/(1 - e^(-m))^2."""
    q = exp_neg_halfwidth(ell)
    return q / (1.0 - q) ** 2


def thurston_factor_bound(x: float) -> float:
    """b(x) = 2*pi*e^(0.502*pi)*e^(-pi^2/(sqrt(e)*x)), increasing, b(0+) = 0."""
    if x <= 0.0:
        raise DomainError("flat length must be positive")
    return 2.0 * math.pi * math.exp(0.502 * math.pi) * math.exp(
        -math.pi**2 / (math.sqrt(math.e) * x)
    )


def metric_comparison_bound(eps: float, radius: float) -> float:
    """(1/2) log((1 + 3*coth^2(eps/2)) * coth^2(R/2)).

    Bounds the log-gap between the hyperbolic and Thurston metrics at a point
    whose R-ball has injectivity radius at least eps.
    """
    if eps <= 0.0 or radius <= 0.0:
        raise DomainError("eps and radius must be positive")
    coth_e = 1.0 / math.tanh(0.5 * eps)
    coth_r = 1.0 / math.tanh(0.5 * radius)
    return 0.5 * math.log((1.0 + 3.0 * coth_e**2) * coth_r**2)


def _boundary_comparison_radius(ell: float) -> float:
    """Largest radius around a boundary point whose ball keeps injectivity >= EPS0/4."""
    s = math.sinh(EPS0 / 4.0) / math.sinh(0.5 * ell)
    if s <= 1.0:
        return math.inf
    return math.asinh(1.0 / math.sinh(0.5 * ell)) - math.acosh(s)


def _core_side_comparison_radius(ell: float) -> float:
    """Analogous radius around the curve of flat-metric length EPS0 inside the tube."""
    half = math.sinh(0.5 * ell)
    inj = math.asinh(half * EPS0 / ell)
    s = math.sinh(0.5 * inj) / half
    if s <= 1.0:
        return math.inf
    return math.acosh(EPS0 / ell) - math.acosh(s)


def _minimize_log_ell(fn, n_scan: int = 4096, bracket_tol: float = 1e-6) -> float:
    """Scan + golden-section minimum of fn over log ell in [log 1e-6, log EPS0].

    Values of +inf mark core lengths where the constraint is vacuous; they are
    skipped.  The minimizers here are monotone, so the scan brackets the edge
    and golden section merely polishes it.
    """
    lo, hi = math.log(1e-6), math.log(EPS0)
    ts = [lo + (hi - lo) * i / (n_scan - 1) for i in range(n_scan)]
    vals = [fn(math.exp(t)) for t in ts]
    i_best = min(range(n_scan), key=lambda i: vals[i])
    a = ts[max(0, i_best - 1)]
    b = ts[min(n_scan - 1, i_best + 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = fn(math.exp(c)), fn(math.exp(d))
    while b - a > bracket_tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(math.exp(d))
    return min(vals[i_best], fc, fd)


def comparison_radii(n_scan: int = 4096) -> tuple[float, float]:
    """Infima (R0, R_core) of the two comparison radii over ell in (0, EPS0].

    Both infima sit at the ell -> 0 edge: R0 -> -log(sinh(EPS0/4)) > pi/4 and
    R_core -> 0.7701... > 0.77; coth^2(R0/2) <= 7.2 and coth^2(R_core/2) <= 7.5.
    """
    r0 = _minimize_log_ell(_boundary_comparison_radius, n_scan=n_scan)
    r_core = _minimize_log_ell(_core_side_comparison_radius, n_scan=n_scan)
    return r0, r_core


def boundary_factor_sup(ell: float) -> float:
    """W(ell) = |-b(x) - log(2*pi/x)| at x = boundary_length(ell); always <= 3.7.

    Of the two one-sided estimates for the flat factor on the collar boundary
    the negative side dominates on x in [2, 2.5], so this absolute value is
    the per-ell sup bound.  Bound formulas elsewhere default to the universal
    cap W_CAP = 3.7.
    """
    x = boundary_length(ell)
    return abs(-thurston_factor_bound(x) - math.log(2.0 * math.pi / x))


def alpha_factor_sup() -> float:
    """The same evaluation at flat length EPS0 (the core-side cap, <= 2.3)."""
    return abs(-thurston_factor_bound(EPS0) - math.log(2.0 * math.pi / EPS0))


def _check_w(w: float) -> float:
    if not (0.0 < w <= W_CAP + 1e-12):
        raise DomainError(f"boundary sup bound must lie in (0, {W_CAP}], got {w!r}")
    return float(w)


def core_stretch_expansion(ell: float, w: float = W_CAP) -> float:
    """Explicit core bound for e^u: 1 + sqrt(2) w e^2.8 pi sigma + 2 w sigma ell
    + 4 sqrt(2) w e^2.8 pi ell sigma^2, with sigma = e^m/(e^m-1)^2."""
    ell = check_core_length(ell)
    w = _check_w(w)
    sig = collar_decay_factor(ell)
    return (
        1.0
        + math.sqrt(2.0) * w * STRETCH_CAP * math.pi * sig
        + 2.0 * w * sig * ell
        + 4.0 * math.sqrt(2.0) * w * STRETCH_CAP * math.pi * ell * sig * sig
    )


def core_stretch_bound(ell: float, w: float = W_CAP) -> float:
    """G(ell): bound for e^u on the core; min of e^2.8 and the explicit expansion."""
    return min(STRETCH_CAP, core_stretch_expansion(ell, w))


def stretch_energy_coeff(ell: float, w: float = W_CAP) -> float:
    """Gbar(ell) = (w * G(ell) * (16/15)^2)^2; at w = 3.7 this is <= 17.73 G^2."""
    return (_check_w(w) * core_stretch_bound(ell, w) * (16.0 / 15.0) ** 2) ** 2


def mbound_checks(ell: float) -> list[BoundReport]:
    """The two flat-half-width inequalities: e^-m <= e^(-pi^2/(2 ell)) and
    1/(e^m - 1) < (16/15) e^-m."""
    ell = check_core_length(ell)
    q = exp_neg_halfwidth(ell)
    # Exact equality at ell = EPS0 (arctan(sinh(arsinh 1)) = pi/4), so allow roundoff.
    rep1 = BoundReport.check(
        "exp_neg_m_vs_pi2_over_2ell", q, math.exp(-math.pi**2 / (2.0 * ell)), tol=1e-12
    )
    inv_em1 = q / (1.0 - q)
    rep2 = BoundReport.check("inv_expm1_vs_16_15_exp_neg_m", inv_em1, (16.0 / 15.0) * q)
    return [rep1, rep2]
