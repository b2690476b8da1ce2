"""Harmonic conformal factor on the flat annulus [-m, m] x S^1.

A harmonic function with bounded boundary traces is stored as a truncated
Fourier series

    u(r, theta) = c0 + c1*r
                + sum_k Re[(v1_k cosh(k r) + v2_k sinh(k r)) e^{-i k theta}],

where v = a + i b encodes a*cos(k theta) + b*sin(k theta).  Fitting from
boundary traces, termwise differentiation, the core decay bounds, and the
development of the core circle into the flat strip all live here.

Evaluation uses the scaled split

    v1 cosh(kr) + v2 sinh(kr) = P e^{-k(m-r)} + Q e^{-k(m+r)},
    P = (v1+v2)/2 e^{km},  Q = (v1-v2)/2 e^{km},

whose exponentials never exceed one on the annulus, so deep collars (large
k*m) neither overflow nor lose the boundary-scale information.

The development relies on the holomorphic completion of u: with
zeta = r + i*theta, u = c0 + Re(G0) for

    G0(zeta) = sum_k [ (conj(v1_k)+conj(v2_k))/2 e^{k zeta}
                       + (v1_k - v2_k)/2 e^{-k zeta} ],

and the developed velocity is (2 pi/ell) i e^{c0} e^{G0(i theta)} up to the
rotation gauge.  A harmonic factor comes from an actual tube iff the
circulation e^{c0} mean_theta e^{G0(i theta)} has modulus one;
`compatibility_shift` projects synthetic data onto that slice.  The constant
mode is carried exactly (never through exp/log of values near 1), so
deviations from the mean velocity stay accurate when exponentially small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .collar import W0_CAP, W_CAP, CORE_SUP_CAP, core_stretch_expansion
from .errors import DomainError, GridError
from .osgood import ScalarField
from .report import BoundReport

_EXP_SPLIT = 600.0  # direct tiny*huge products are exact below this exponent


def default_mode_cutoff(m: float) -> int:
    """Cutoff K = ceil(40/m) + 8; the dropped tail is below 1e-14 for any W <= 3.7."""
    return int(math.ceil(40.0 / m)) + 8


def _sech(x: np.ndarray) -> np.ndarray:
    e = np.exp(-x)
    return 2.0 * e / (1.0 + e * e)


def _csch(x: np.ndarray) -> np.ndarray:
    e = np.exp(-x)
    return 2.0 * e / (-np.expm1(-2.0 * x))


@lru_cache(maxsize=64)
def _mode_phases(modes: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(e^{-ik theta_j}, e^{+ik theta_j}) on the uniform n-grid, shape (K, n)."""
    k = np.arange(1, modes + 1, dtype=float)
    theta = 2.0 * np.pi * np.arange(n) / n
    neg = np.exp(-1j * np.outer(k, theta))
    return neg, np.conj(neg)


def uniform_angles(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


@dataclass(eq=False)
class FourierHarmonic:
    """Truncated harmonic series on the flat annulus of half-width m."""

    m: float
    c0: float
    c1: float
    v1: np.ndarray  # complex, modes 1..K
    v2: np.ndarray

    def __post_init__(self) -> None:
        self.v1 = np.asarray(self.v1, dtype=complex)
        self.v2 = np.asarray(self.v2, dtype=complex)
        if self.v1.shape != self.v2.shape:
            raise DomainError("v1 and v2 must have equal length")

    @property
    def modes(self) -> int:
        return int(self.v1.size)

    def _check_r(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if np.any(np.abs(r) > self.m + 1e-12):
            raise DomainError(f"radial coordinate outside [-m, m], m={self.m:.6g}")
        return r

    def _scaled_coeffs(self) -> tuple[np.ndarray, np.ndarray]:
        """(P, Q) = e^{km} ((v1+v2)/2, (v1-v2)/2), overflow-free."""
        k = np.arange(1, self.modes + 1, dtype=float)
        km = k * self.m
        half_sum = 0.5 * (self.v1 + self.v2)
        half_diff = 0.5 * (self.v1 - self.v2)

        def scale(c: np.ndarray) -> np.ndarray:
            out = np.zeros_like(c)
            direct = km <= _EXP_SPLIT
            out[direct] = c[direct] * np.exp(km[direct])
            big = ~direct & (c != 0.0)
            if np.any(big):
                out[big] = np.exp(km[big] + np.log(c[big]))
            return out

        return scale(half_sum), scale(half_diff)

    def eval(self, r, theta) -> np.ndarray:
        return self.partials(r, theta)[0]

    def partials(self, r, theta):
        """(u, u_r, u_theta, u_rr, u_rtheta, u_thetatheta), termwise differentiated."""
        r = self._check_r(r)
        theta = np.asarray(theta, dtype=float)
        r, theta = np.broadcast_arrays(r, theta)
        k = np.arange(1, self.modes + 1, dtype=float)
        kk = k.reshape((-1,) + (1,) * r.ndim)
        p, q = self._scaled_coeffs()
        p = p.reshape(kk.shape)
        q = q.reshape(kk.shape)
        e_out = np.exp(kk * (r - self.m))       # e^{-k(m-r)} <= 1
        e_in = np.exp(-kk * (r + self.m))       # e^{-k(m+r)} <= 1
        even = p * e_out + q * e_in             # v1 cosh + v2 sinh
        odd = p * e_out - q * e_in              # v1 sinh + v2 cosh
        phase = np.exp(-1j * kk * theta)
        u = self.c0 + self.c1 * r + np.real(even * phase).sum(axis=0)
        u_r = self.c1 + np.real(kk * odd * phase).sum(axis=0)
        u_t = np.real(-1j * kk * even * phase).sum(axis=0)
        u_rr = np.real(kk**2 * even * phase).sum(axis=0)
        u_rt = np.real(-1j * kk**2 * odd * phase).sum(axis=0)
        u_tt = np.real(-(kk**2) * even * phase).sum(axis=0)
        return u, u_r, u_t, u_rr, u_rt, u_tt

    def core_partials(self, n: int = 256):
        """partials on the core circle r = 0 over the uniform n-grid (fast path)."""
        phase, _ = _mode_phases(self.modes, n)
        k = np.arange(1, self.modes + 1, dtype=float)
        u = self.c0 + np.real(self.v1 @ phase)
        u_r = self.c1 + np.real((k * self.v2) @ phase)
        u_t = np.real((-1j * k * self.v1) @ phase)
        u_rr = np.real((k**2 * self.v1) @ phase)
        u_rt = np.real((-1j * k**2 * self.v2) @ phase)
        u_tt = -u_rr + 0.0
        return u, u_r, u_t, u_rr, u_rt, u_tt

    def as_scalar_field(self) -> ScalarField:
        """Adapter for the tensor machinery, chart (r, theta)."""

        def value(r, t):
            return float(self.partials(r, t)[0])

        def grad(r, t):
            p = self.partials(r, t)
            return (float(p[1]), float(p[2]))

        def hess(r, t):
            p = self.partials(r, t)
            return (float(p[3]), float(p[4]), float(p[5]))

        return ScalarField(value, grad, hess, chart="rtheta")


def fit_boundary(
    samples_plus: np.ndarray,
    samples_minus: np.ndarray,
    K: int,
    m: float,
    tilt: bool = False,
) -> FourierHarmonic:
    """Fit the harmonic extension of boundary traces at r = +m and r = -m.

    Each trace must sample a uniform theta-grid of equal length n >= 2K+1.
    Per mode the 2x2 system (cosh/sinh at km) is solved in closed form; the
    zero mode keeps the mean, and the linear-in-r tilt from unequal means is
    only retained when `tilt` is set (a genuine tube factor has none).
    """
    gp = np.asarray(samples_plus, dtype=float)
    gm = np.asarray(samples_minus, dtype=float)
    if gp.shape != gm.shape or gp.ndim != 1:
        raise GridError("boundary traces must be 1-d arrays of equal length")
    n = gp.size
    if n < 2 * K + 1:
        raise GridError(f"grid of length {n} too short for {K} modes (need >= {2*K+1})")
    fp = np.fft.rfft(gp)
    fm = np.fft.rfft(gm)
    k = np.arange(1, K + 1, dtype=float)
    up = 2.0 * np.conj(fp[1 : K + 1]) / n   # amplitude coefficients a + i b
    um = 2.0 * np.conj(fm[1 : K + 1]) / n
    v1 = 0.5 * (up + um) * _sech(k * m)
    v2 = 0.5 * (up - um) * _csch(k * m)
    mean_p = fp[0].real / n
    mean_m = fm[0].real / n
    c0 = 0.5 * (mean_p + mean_m)
    c1 = (mean_p - mean_m) / (2.0 * m) if tilt else 0.0
    return FourierHarmonic(m=m, c0=c0, c1=c1, v1=v1, v2=v2)


def eval_partials(fh: FourierHarmonic, r, theta):
    return fh.partials(r, theta)


def reconstruction_error(
    fh: FourierHarmonic, samples_plus: np.ndarray, samples_minus: np.ndarray
) -> float:
    """Max abs mismatch between the fitted series and the boundary samples."""
    n = np.asarray(samples_plus).size
    theta = uniform_angles(n)
    err_p = np.abs(fh.eval(np.full(n, fh.m), theta) - samples_plus).max()
    err_m = np.abs(fh.eval(np.full(n, -fh.m), theta) - samples_minus).max()
    return float(max(err_p, err_m))


def truncation_tail_bound(m: float, modes: int, w: float = W_CAP) -> float:
    """Sum_{k>K} 6 w e^{-km} = 6 w e^{-(K+1)m} / (1 - e^{-m})."""
    q = math.exp(-m)
    return 6.0 * w * math.exp(-(modes + 1) * m) / (1.0 - q) if q > 0.0 else 0.0


# ---------------------------------------------------------------------------
# Decay bounds


def _geom_sums(q: float) -> tuple[float, float]:
    """(sum k q^k, sum k^2 q^k) for 0 <= q < 1."""
    s1 = q / (1.0 - q) ** 2
    s2 = q * (1.0 + q) / (1.0 - q) ** 3
    return s1, s2


DERIVATIVE_BOUND_FORMULAS = {
    "du_dr": "4*W*e^m/(e^m-1)^2",
    "du_dtheta": "2*W*e^m/(e^m-1)^2",
    "d2u_drdtheta": "4*W*e^m*(e^m+1)/(e^m-1)^3",
    "d2u_dr2": "2*W*e^m*(e^m+1)/(e^m-1)^3",
    "d2u_dtheta2": "4*W^2*e^{2m}*(e^{2m}+1)/(e^{2m}-1)^3",
    "d2u_dtheta2_harmonicity": "2*W*e^m*(e^m+1)/(e^m-1)^3",
}


def core_derivative_bounds(m: float, w: float = W_CAP) -> dict[str, float]:
    """Closed-form decay bounds for the five core partials (and the
    harmonicity-corrected second angular one)."""
    q = math.exp(-m)
    s1, s2 = _geom_sums(q)
    _, s2_double = _geom_sums(q * q)
    return {
        "du_dr": 4.0 * w * s1,
        "du_dtheta": 2.0 * w * s1,
        "d2u_drdtheta": 4.0 * w * s2,
        "d2u_dr2": 2.0 * w * s2,
        "d2u_dtheta2": 4.0 * w * w * s2_double,
        "d2u_dtheta2_harmonicity": 2.0 * w * s2,
    }


def derivative_bounds_at_core(
    fh: FourierHarmonic, w: float = W_CAP, n_theta: int = 512
) -> list[BoundReport]:
    """The five core decay bounds, with the sup of each partial over a theta-grid.

    The first four are sup bounds for a harmonic function with boundary sup
    at most w and no tilt mode.  The fifth (second angular derivative) is
    reproduced exactly as stated in the source estimates; since
    u_thetatheta = -u_rr for a harmonic function, that stated bound is
    strictly smaller than the true sup bound and fails on generic data (see
    README and `second_angular_bound_harmonicity`).
    """
    _, u_r, u_t, u_rr, u_rt, u_tt = fh.core_partials(n_theta)
    bounds = core_derivative_bounds(fh.m, w)
    sup = lambda a: float(np.abs(a).max())
    values = {
        "du_dr": sup(u_r),
        "du_dtheta": sup(u_t),
        "d2u_drdtheta": sup(u_rt),
        "d2u_dr2": sup(u_rr),
        "d2u_dtheta2": sup(u_tt),
    }
    return [BoundReport.check(name, values[name], bounds[name]) for name in values]


def second_angular_bound_harmonicity(
    fh: FourierHarmonic, w: float = W_CAP, n_theta: int = 512
) -> BoundReport:
    """Harmonicity-corrected second-angular bound: |u_tt| = |u_rr| <= 2W sum k^2 e^{-km}."""
    u_tt = fh.core_partials(n_theta)[5]
    bound = core_derivative_bounds(fh.m, w)["d2u_dtheta2_harmonicity"]
    return BoundReport.check("d2u_dtheta2_harmonicity", float(np.abs(u_tt).max()), bound)


def derivative_bounds_general(
    fh: FourierHarmonic, w: float, r: float, n_theta: int = 512
) -> list[BoundReport]:
    """The general-radius variants: m is replaced by m - |r| and all linear
    bounds carry the coefficient 4W (the angular-squared one 16 W^2)."""
    theta = uniform_angles(n_theta)
    _, u_r, u_t, u_rr, u_rt, u_tt = fh.partials(np.full_like(theta, r), theta)
    p = math.exp(-(fh.m - abs(r)))
    s1, s2 = _geom_sums(p)
    _, s2_double = _geom_sums(p * p)
    sup = lambda a: float(np.abs(a).max())
    return [
        BoundReport.check("du_dr", sup(u_r), 4.0 * w * s1),
        BoundReport.check("du_dtheta", sup(u_t), 4.0 * w * s1),
        BoundReport.check("d2u_drdtheta", sup(u_rt), 4.0 * w * s2),
        BoundReport.check("d2u_dr2", sup(u_rr), 4.0 * w * s2),
        BoundReport.check("d2u_dtheta2", sup(u_tt), 16.0 * w * w * s2_double),
    ]


def estcore_rhs(ell: float, w: float = W_CAP) -> float:
    """Closed-form bound for e^u on the core of a tube of core length ell."""
    return core_stretch_expansion(ell, w)


def core_sup_checks(
    fh: FourierHarmonic, w: float, w0: float, ell: float, n_theta: int = 512
) -> list[BoundReport]:
    """Core-circle sups of |u| (vs 2.8) and of e^u (vs the explicit stretch bound)."""
    if abs(fh.c0) > w0 + 1e-12:
        raise DomainError("constant mode exceeds the declared core-side cap")
    u = fh.core_partials(n_theta)[0]
    return [
        BoundReport.check("core_sup_abs", float(np.abs(u).max()), CORE_SUP_CAP),
        BoundReport.check("core_sup_stretch", float(np.exp(u).max()), estcore_rhs(ell, w)),
    ]


# ---------------------------------------------------------------------------
# Development of the core circle into the flat strip


def covariant_accel_core(fh: FourierHarmonic, ell: float, s) -> np.ndarray:
    """Covariant acceleration (2 pi/ell)^2 (-u_r, u_theta) of the core at parameter s."""
    theta = 2.0 * np.pi * np.asarray(s, dtype=float) / ell
    _, u_r, u_t, _, _, _ = fh.partials(np.zeros_like(theta), theta)
    c = (2.0 * math.pi / ell) ** 2
    return np.stack([-c * u_r, c * u_t], axis=-1)


def covariant_accel_core_norm(fh: FourierHarmonic, ell: float, s) -> np.ndarray:
    """Flat-metric norm of the covariant acceleration; carries the factor e^u."""
    theta = 2.0 * np.pi * np.asarray(s, dtype=float) / ell
    u, u_r, u_t, _, _, _ = fh.partials(np.zeros_like(theta), theta)
    c = (2.0 * math.pi / ell) ** 2
    return np.exp(u) * c * np.hypot(u_r, u_t)


def mode_completion_on_core(fh: FourierHarmonic, n: int) -> np.ndarray:
    """G0(i theta) on the uniform n-grid: the completion without the constant mode."""
    if fh.c1 != 0.0:
        raise DomainError("development requires a zero tilt mode (c1 = 0)")
    phase_neg, phase_pos = _mode_phases(fh.modes, n)
    a = 0.5 * (np.conj(fh.v1) + np.conj(fh.v2))
    b = 0.5 * (fh.v1 - fh.v2)
    return a @ phase_pos + b @ phase_neg


def completion_on_core(fh: FourierHarmonic, theta: np.ndarray) -> np.ndarray:
    """Gc(i theta) = c0 + G0(i theta) at arbitrary angles."""
    if fh.c1 != 0.0:
        raise DomainError("development requires a zero tilt mode (c1 = 0)")
    k = np.arange(1, fh.modes + 1, dtype=float)
    e_plus = np.exp(1j * np.outer(k, np.asarray(theta, dtype=float)))
    a = 0.5 * (np.conj(fh.v1) + np.conj(fh.v2))
    b = 0.5 * (fh.v1 - fh.v2)
    return fh.c0 + a @ e_plus + b @ np.conj(e_plus)


def circulation_mean(fh: FourierHarmonic, n_grid: int = 1024) -> complex:
    """e^{c0} mean_theta e^{G0(i theta)}; modulus one iff the factor comes from a tube."""
    mean0 = complex(np.exp(mode_completion_on_core(fh, n_grid)).mean())
    return math.exp(fh.c0) * mean0


def compatibility_shift(fh: FourierHarmonic, n_grid: int = 1024) -> FourierHarmonic:
    """Replace the constant mode so the circulation mean has modulus one.

    The required value is c0 = -log|mean e^{G0}|, independent of the old
    constant; the old c0 (for fitted mean-free data, pure DFT roundoff) is
    discarded exactly rather than cancelled through exp/log.
    """
    mean0 = complex(np.exp(mode_completion_on_core(fh, n_grid)).mean())
    return FourierHarmonic(m=fh.m, c0=-math.log(abs(mean0)), c1=fh.c1, v1=fh.v1, v2=fh.v2)


def strip_velocity_deviation(
    fh: FourierHarmonic, ell: float, n: int = 512
) -> tuple[np.ndarray, complex, float]:
    """Developed-core velocities minus their mean, sampled on a periodic s-grid.

    Returns (deviation samples, mean velocity, ds).  In the canonical rotation
    gauge the mean velocity is (2 pi/ell) i |circulation|; the deviation is
    evaluated through expm1 of the mode completion (the constant mode enters
    only through the exact prefactor e^{c0}), so exponentially small
    deviations survive in double precision.
    """
    g0 = mode_completion_on_core(fh, n)
    mean0 = complex(np.exp(g0).mean())
    scale = (2.0 * math.pi / ell) * math.exp(fh.c0) * abs(mean0)
    deviation = 1j * scale * np.expm1(g0 - np.log(mean0))
    return deviation, 1j * scale, ell / n


@dataclass(eq=False)
class DevelopedCurve:
    """Core circle developed into the flat strip."""

    s: np.ndarray
    w: np.ndarray
    wdot: np.ndarray
    closure: complex
    mean_velocity: complex
    deviation_sq_integral: float

    def speed_residual(self, fh: FourierHarmonic, ell: float) -> float:
        theta = 2.0 * np.pi * self.s / ell
        u = fh.partials(np.zeros_like(theta), theta)[0]
        return float(np.abs(np.abs(self.wdot) - np.exp(u) * 2.0 * math.pi / ell).max())


def develop_core(fh: FourierHarmonic, ell: float, steps: int = 4096) -> DevelopedCurve:
    """Develop the core into the strip by RK4 on the intrinsic curve equations.

    State: position w and direction angle phi with
        dw/ds   = (2 pi/ell) e^{u(0, theta(s))} e^{i phi},
        dphi/ds = (2 pi/ell) u_r(0, theta(s)),
    i.e. speed e^u (2 pi/ell) and turning by the geodesic curvature
    kappa = e^{-u} u_r of the line r = 0 in the metric e^{2u}(dr^2+dtheta^2).
    The rotation gauge is fixed so the mean velocity points straight up; the
    closure displacement then equals 2 pi i exactly when the factor satisfies
    the unit-circulation condition.
    """
    if steps < 256:
        raise GridError("develop_core needs at least 256 steps")
    mean0 = complex(np.exp(mode_completion_on_core(fh, 1024)).mean())
    v0_gauge = -float(np.sum(fh.v2.imag))  # conjugate harmonic at theta = 0
    phi0 = 0.5 * math.pi - math.atan2(mean0.imag, mean0.real) + v0_gauge

    two_pi_over_ell = 2.0 * math.pi / ell
    k = np.arange(1, fh.modes + 1, dtype=float)
    kv2 = k * fh.v2

    def rhs(s: float, phi: float) -> tuple[complex, float]:
        phase = np.exp(-1j * k * (two_pi_over_ell * s))
        u = fh.c0 + float(np.real(fh.v1 @ phase))
        u_r = float(np.real(kv2 @ phase))
        return two_pi_over_ell * math.exp(u) * complex(math.cos(phi), math.sin(phi)), \
            two_pi_over_ell * u_r

    h = ell / steps
    s_samples = np.linspace(0.0, ell, steps + 1)
    w = np.empty(steps + 1, dtype=complex)
    wdot = np.empty(steps + 1, dtype=complex)
    w_cur, phi_cur = 0.0 + 0.0j, phi0
    for i in range(steps):
        s = i * h
        k1w, k1p = rhs(s, phi_cur)
        w[i], wdot[i] = w_cur, k1w
        k2w, k2p = rhs(s + 0.5 * h, phi_cur + 0.5 * h * k1p)
        k3w, k3p = rhs(s + 0.5 * h, phi_cur + 0.5 * h * k2p)
        k4w, k4p = rhs(s + h, phi_cur + h * k3p)
        w_cur = w_cur + (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        phi_cur = phi_cur + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
    w[steps] = w_cur
    wdot[steps] = rhs(ell, phi_cur)[0]

    deviation, _, ds = strip_velocity_deviation(fh, ell, n=2048)
    dev_sq = float((np.abs(deviation) ** 2).sum() * ds)
    return DevelopedCurve(
        s=s_samples,
        w=w,
        wdot=wdot,
        closure=complex(w_cur),
        mean_velocity=complex(w_cur / ell),
        deviation_sq_integral=dev_sq,
    )


# ---------------------------------------------------------------------------
# Synthetic boundary data for property sweeps


def random_boundary_samples(
    rng: np.random.Generator, w: float = W_CAP, n_modes: int = 8, n_grid: int = 512,
    m: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Random truncated Fourier traces for both boundary circles, joint sup = w.

    Mode-k cosine/sine coefficients are uniform in [-w/(2k^2), w/(2k^2)]; the
    pair is jointly rescaled so the larger grid-sup equals w exactly (to grid
    resolution).  There is no constant term, matching a mean-free factor.
    When the target half-width m is given, modes with k*m beyond the double
    exponent range (where e^{-km} underflows and the stored coefficients
    cannot round-trip the trace) are not generated.
    """
    if m is not None:
        n_modes = max(1, min(n_modes, int(680.0 / m)))
    k = np.arange(1, n_modes + 1, dtype=float)
    cap = w / (2.0 * k**2)
    phase_neg, _ = _mode_phases(n_modes, n_grid)

    def trace() -> np.ndarray:
        a = rng.uniform(-1.0, 1.0, n_modes) * cap
        b = rng.uniform(-1.0, 1.0, n_modes) * cap
        return np.real((a + 1j * b) @ phase_neg)

    gp, gm = trace(), trace()
    scale = w / max(np.abs(gp).max(), np.abs(gm).max())
    return gp * scale, gm * scale


def make_synthetic_tube(
    ell: float,
    rng: np.random.Generator,
    w: float = W_CAP,
    n_modes: int = 8,
    n_grid: int = 512,
    K: int | None = None,
) -> FourierHarmonic:
    """Random tube factor at core length ell: fitted boundary data, then the
    unit-circulation shift so the factor is realizable by a genuine tube."""
    from .tube import flat_halfwidth

    m = flat_halfwidth(ell)
    gp, gm = random_boundary_samples(rng, w=w, n_modes=n_modes, n_grid=n_grid, m=m)
    fh = fit_boundary(gp, gm, K if K is not None else max(default_mode_cutoff(m), n_modes), m)
    return compatibility_shift(fh)
