"""Verification sweeps behind the CLI subcommands.

Each suite turns one slice of the library into `ReportRow`s: measured values
next to their closed-form bounds (or, for equality checks, next to their
exact targets with a residual tolerance).  Sweeps are deterministic in
(config, seed): the random generator for trial `t` at grid index `i` is
seeded with (seed, i, t), so fan-out across threads cannot change results.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import collar, fourier, halfplane, osgood, pairing, renorm, tube
from .report import ReportDocument, ReportRow

VERSION = "0.1.0"

DEFAULT_GRID_RANGE = (0.1, tube.EPS0)
DEFAULT_GRID_N = 10
DEFAULT_TRIALS = 200
DEFAULT_SEED = 7
EQ_TOL = 1e-9

THREADS_ENV = "TUBESCHWARZ_THREADS"


def default_grid(n: int = DEFAULT_GRID_N) -> list[float]:
    lo, hi = DEFAULT_GRID_RANGE
    return [float(x) for x in np.geomspace(lo, hi, n)]


@dataclass
class SuiteConfig:
    """Sweep parameters; `validate` raises ValueError on unusable configs."""

    ell_grid: list[float] = field(default_factory=default_grid)
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    modes: int | None = None
    tol: float = EQ_TOL
    fmt: str = "json"
    out: str | None = None
    threads: int = 0  # 0: take from environment, else 1

    def validate(self) -> None:
        if not self.ell_grid:
            raise ValueError("empty core-length grid")
        for ell in self.ell_grid:
            if not (0.0 < ell <= tube.EPS0 + 1e-12):
                raise ValueError(f"core length {ell!r} outside (0, {tube.EPS0:.6g}]")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"unsupported format {self.fmt!r}")

    def worker_count(self) -> int:
        if self.threads > 0:
            return self.threads
        return max(1, int(os.environ.get(THREADS_ENV, "1")))

    def echo(self) -> dict:
        return {
            "ell_grid": list(self.ell_grid),
            "trials": self.trials,
            "seed": self.seed,
            "modes": self.modes,
            "tol": self.tol,
            "format": self.fmt,
        }


def trial_rng(seed: int, ell_index: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, ell_index, trial))))


def _eq_row(suite: str, name: str, value: float, target: float, tol: float,
            ell: float | None = None, seed: int | None = None, formula: str = "") -> ReportRow:
    """Equality-type row: satisfied iff |value - target| <= tol."""
    return ReportRow(
        suite=suite, name=name, value=float(value), bound=float(target),
        satisfied=bool(abs(value - target) <= tol), margin=float(target - value),
        ell=ell, seed=seed, formula=formula,
    )


def _le_row(suite: str, name: str, value: float, bound: float,
            ell: float | None = None, seed: int | None = None,
            formula: str = "", tol: float = 0.0) -> ReportRow:
    return ReportRow(
        suite=suite, name=name, value=float(value), bound=float(bound),
        satisfied=bool(value <= bound + tol), margin=float(bound - value),
        ell=ell, seed=seed, formula=formula,
    )


def _map_grid(config: SuiteConfig, fn):
    """Apply fn(i, ell) over the grid, optionally fanning out over threads."""
    workers = config.worker_count()
    items = list(enumerate(config.ell_grid))
    if workers <= 1:
        return [fn(i, ell) for i, ell in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda it: fn(*it), items))


# ---------------------------------------------------------------------------
# symmetric: toy-model exactness and the Schwarzian engine


def _engine_rows(config: SuiteConfig) -> list[ReportRow]:
    rows: list[ReportRow] = []
    rng = trial_rng(config.seed, 0, 0)
    pts = [complex(x, y) for x, y in zip(rng.uniform(-1.5, 1.5, 50), rng.uniform(0.4, 2.0, 50))]

    worst_mob = 0.0
    for _ in range(10):
        coef = rng.uniform(-1.5, 1.5, 4)
        try:
            m = halfplane.MobiusMap(*[complex(c) for c in coef])
        except ValueError:
            continue
        sampled = halfplane.SampledMap(m)
        worst_mob = max(worst_mob, max(abs(halfplane.schwarzian(sampled, z)) for z in pts))
    rows.append(_le_row("symmetric", "schwarzian_mobius_sampled", worst_mob, 1e-10,
                        formula="S(Moebius) = 0"))

    alphas = [2.0 + 0j, 2.0j] + [2.0j * math.pi / ell for ell in config.ell_grid]
    worst_rel = 0.0
    for alpha in alphas:
        sampled = halfplane.SampledMap(halfplane.PowerMap(alpha))
        for z in pts:
            exact = (1.0 - alpha**2) / (2.0 * z * z)
            got = halfplane.schwarzian(sampled, z)
            worst_rel = max(worst_rel, abs(got - exact) / abs(exact))
    rows.append(_le_row("symmetric", "schwarzian_power_sampled_rel", worst_rel, 1e-8,
                        formula="S(z^a) = (1-a^2)/(2 z^2)"))

    families = _composition_pairs(config, rng)
    worst_comp = 0.0
    for f, g in families:
        z = complex(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 1.5))
        worst_comp = max(worst_comp, halfplane.schwarzian_compose_residual(f, g, z))
    rows.append(_le_row("symmetric", "schwarzian_composition_residual", worst_comp, 1e-9,
                        formula="S(f.g) = S(f)(g) g'^2 + S(g)"))

    # Kraus-Nehari on a univalent family; Kra-Maskit consistency on the grid.
    worst_univalent = 0.0
    for alpha in (0.25, 0.5, 1.5, 2.0):
        q = halfplane.schwarzian_differential(halfplane.PowerMap(alpha))
        worst_univalent = max(worst_univalent, halfplane.infinity_norm_estimate(q))
    rows.append(_le_row("symmetric", "kraus_nehari_univalent", worst_univalent, 1.5,
                        formula="||S(f)||_inf <= 3/2 for univalent f"))
    for ell in config.ell_grid:
        q = halfplane.schwarzian_differential(tube.symmetric_developing_map(ell))
        est = halfplane.infinity_norm_estimate(q)
        rows.append(_le_row("symmetric", "kra_maskit_lower", halfplane.kra_maskit_lower(ell / 2.0),
                            est, ell=ell, formula="||S||_inf >= coth^2(ell/4)/2"))
    return rows


def _composition_pairs(config: SuiteConfig, rng: np.random.Generator, n_pairs: int = 100):
    inner_pool = []
    for _ in range(8):
        t = rng.uniform(-1.0, 1.0)
        inner_pool.append(halfplane.scaling_map(t))
        c = rng.uniform(-0.5, 0.5, 3)
        inner_pool.append(halfplane.MobiusMap(1.0 + c[0], c[1], 0.0, 1.0))
    outer_pool = [halfplane.ExpMap(1.0), halfplane.PowerMap(2.0 + 0j), halfplane.PowerMap(2.0j)]
    outer_pool += [halfplane.PowerMap(2.0j * math.pi / ell) for ell in config.ell_grid[:4]]
    outer_pool += [halfplane.MobiusMap(1.0, 1.0j, 0.0, 1.0)]
    pairs = []
    for _ in range(n_pairs):
        f = outer_pool[int(rng.integers(len(outer_pool)))]
        g = inner_pool[int(rng.integers(len(inner_pool)))]
        pairs.append((f, g))
    return pairs


def symmetric_suite(config: SuiteConfig) -> list[ReportRow]:
    rows = _engine_rows(config)
    for ell in config.ell_grid:
        q = halfplane.QuadraticDifferential(
            lambda z, e=ell: tube.symmetric_schwarzian_coefficient(e, z))
        core = pairing.CoreCurve(ell)
        res = pairing.pair_schwarzian(q, core)
        exact = math.pi**2 / ell + ell / 4.0
        rows.append(_eq_row("symmetric", "pair_earthquake", res.earthquake_value, 0.0,
                            1e-10, ell=ell, formula="= 0"))
        rows.append(_eq_row("symmetric", "pair_grafting", abs(res.grafting_value), exact,
                            1e-10, ell=ell, formula="pi^2/ell + ell/4"))
        rows.append(_le_row("symmetric", "pair_quadrature_error",
                            res.quadrature_error_estimate, 1e-10, ell=ell))
        dec = pairing.decomposition_residual_symmetric(ell)
        rows.append(_le_row("symmetric", "decomposition_residual_eq", dec.earthquake, 1e-10, ell=ell))
        rows.append(_le_row("symmetric", "decomposition_residual_gr", dec.grafting, 1e-8, ell=ell))
        b3 = pairing.term_b3(pairing.zero_harmonic(ell), ell)
        rows.append(_eq_row("symmetric", "ambient_term_center", b3.norm_gr,
                            math.pi**2 / ell, 1e-10, ell=ell, formula="pi^2/ell"))
        # Inverse-map Schwarzian via the composition rule.
        f_ell = tube.symmetric_developing_map(ell)
        w = f_ell(1.0j * math.e)
        inv_exact = tube.symmetric_inverse_schwarzian_coefficient(ell, w)
        fwd = tube.symmetric_schwarzian_coefficient(ell, 1.0j * math.e)
        d1 = f_ell.derivatives(1.0j * math.e)[1]
        resid = abs(inv_exact * d1**2 + fwd)  # cocycle for f^-1 . f = id
        rows.append(_le_row("symmetric", "inverse_schwarzian_cocycle", resid, 1e-9, ell=ell))
    return rows


# ---------------------------------------------------------------------------
# bounds: collar constants and named bound functions


def bounds_suite(config: SuiteConfig) -> list[ReportRow]:
    rows: list[ReportRow] = []
    r0, r_core = collar.comparison_radii()
    coth2 = lambda x: 1.0 / math.tanh(0.5 * x) ** 2
    rows.append(_le_row("bounds", "comparison_radius_boundary_floor", math.pi / 4.0, r0,
                        formula="R0 > pi/4"))
    rows.append(_le_row("bounds", "comparison_radius_core_floor", 0.77, r_core,
                        formula="R_core > 0.77"))
    rows.append(_le_row("bounds", "coth_sq_boundary", coth2(r0), 7.2))
    rows.append(_le_row("bounds", "coth_sq_core", coth2(r_core), 7.5))
    rows.append(_le_row("bounds", "thurston_gap_boundary",
                        collar.metric_comparison_bound(tube.EPS0 / 4.0, r0), 3.08))
    rows.append(_le_row("bounds", "thurston_gap_core_curve",
                        collar.metric_comparison_bound(math.asinh(tube.EPS0 / 2.0), r_core), 2.56))
    w25 = abs(-collar.thurston_factor_bound(2.5) - math.log(2.0 * math.pi / 2.5))
    rows.append(_le_row("bounds", "boundary_factor_worst_case", w25, collar.W_CAP))
    rows.append(_le_row("bounds", "boundary_factor_worst_case_floor", 3.69, w25))
    w0 = collar.alpha_factor_sup()
    rows.append(_le_row("bounds", "core_side_factor_cap", w0, collar.W0_CAP))
    rows.append(_le_row("bounds", "core_side_factor_floor", 2.28, w0))
    rows.append(_le_row("bounds", "constant_consistency_142", 8.0 * 17.73, 142.0,
                        formula="142 >= 8*17.73"))

    for ell in config.ell_grid:
        m = tube.flat_halfwidth(ell)
        q = collar.exp_neg_halfwidth(ell)
        bl = tube.boundary_length(ell)
        g = collar.core_stretch_bound(ell)
        gbar = collar.stretch_energy_coeff(ell)
        rows.append(_le_row("bounds", "boundary_factor_sup", collar.boundary_factor_sup(ell),
                            collar.W_CAP, ell=ell))
        rows.append(_le_row("bounds", "halfwidth_floor", math.pi**2 / (2.0 * ell), m,
                            ell=ell, formula="m >= pi^2/(2 ell)"))
        rows.append(_le_row("bounds", "exp_neg_halfwidth_cap", q, 1.0 / 16.0, ell=ell))
        for rep in collar.mbound_checks(ell):
            rows.append(ReportRow.from_bound("bounds", rep, ell=ell))
        rows.append(_le_row("bounds", "boundary_length_upper", bl, 2.5, ell=ell))
        rows.append(_le_row("bounds", "boundary_length_lower", 2.0, bl, ell=ell))
        rows.append(_le_row("bounds", "core_stretch_cap", g, collar.STRETCH_CAP, ell=ell))
        rows.append(_le_row("bounds", "core_stretch_floor", 1.0, g, ell=ell))
        rows.append(_le_row("bounds", "stretch_energy_cap", gbar,
                            17.73 * g * g, ell=ell, tol=1e-9,
                            formula="Gbar <= 17.73 G^2"))
    return rows


# ---------------------------------------------------------------------------
# fourier: coefficient and derivative decay sweeps


@dataclass
class TubeSweepStats:
    """Aggregate of one (ell, trials) synthetic sweep; maxima over trials."""

    ell: float
    m: float
    ell_index: int = 0
    k_fit: int = 0
    coeff_v1_scaled: float = 0.0   # max_k |v1(k)| e^{km}; bound 2W
    coeff_v2_scaled: float = 0.0   # max_k |v2(k)| e^{km}; bound 4W
    partial_sups: dict = field(default_factory=dict)
    laplacian: float = 0.0
    core_abs: float = 0.0
    core_stretch: float = 0.0
    reconstruction: float = 0.0
    circulation_defect: float = 0.0
    b2_eq: float = 0.0
    b2_gr: float = 0.0
    b3_eq: float = 0.0
    eq_total: float = 0.0
    gr_offset_total: float = 0.0
    deviation_sq: float = 0.0
    mean_b2_b3_eq: float = 0.0
    violations: dict = field(default_factory=dict)


_PARTIAL_NAMES = ("du_dr", "du_dtheta", "d2u_drdtheta", "d2u_dr2", "d2u_dtheta2")


def run_tube_sweep(ell: float, ell_index: int, config: SuiteConfig,
                   w: float = collar.W_CAP) -> TubeSweepStats:
    """Per-core-length synthetic sweep shared by the fourier and pairing suites.

    Bound violation counting follows the closed forms exactly; the per-trial
    values come from one shared core-partials evaluation per tube, which
    `test_pairing`/`test_fourier` pin against the one-call public API.
    """
    m = tube.flat_halfwidth(ell)
    k_fit = config.modes or max(fourier.default_mode_cutoff(m), 8)
    stats = TubeSweepStats(ell=ell, m=m, ell_index=ell_index, k_fit=k_fit)
    stats.violations = {name: 0 for name in _PARTIAL_NAMES}
    stats.violations.update(coeff_v1=0, coeff_v2=0, d2u_dtheta2_harmonicity=0)
    ks = np.arange(1, k_fit + 1, dtype=float)
    decay = np.exp(-np.minimum(ks * m, 700.0))
    bounds = fourier.core_derivative_bounds(m, w)
    for name in (*_PARTIAL_NAMES, "d2u_dtheta2_harmonicity"):
        stats.partial_sups[name] = (0.0, bounds[name])
    eq_values = []

    def bump(name: str, value: float) -> None:
        prev, bound = stats.partial_sups[name]
        stats.partial_sups[name] = (max(prev, value), bound)
        if value > bound:
            stats.violations[name] += 1

    for t in range(config.trials):
        rng = trial_rng(config.seed, ell_index, t)
        gp, gm = fourier.random_boundary_samples(rng, w=w, m=m)
        fh = fourier.compatibility_shift(fourier.fit_boundary(gp, gm, k_fit, m))
        if t < 5:
            stats.reconstruction = max(
                stats.reconstruction,
                fourier.reconstruction_error(
                    fourier.FourierHarmonic(m=m, c0=0.0, c1=0.0, v1=fh.v1, v2=fh.v2),
                    gp, gm),
            )
            stats.circulation_defect = max(
                stats.circulation_defect,
                abs(abs(fourier.circulation_mean(fh, 2048)) - 1.0))
        with np.errstate(divide="ignore"):
            sc1 = np.where(decay > 0.0, np.abs(fh.v1) / decay, 0.0)
            sc2 = np.where(decay > 0.0, np.abs(fh.v2) / decay, 0.0)
        stats.coeff_v1_scaled = max(stats.coeff_v1_scaled, float(sc1.max()))
        stats.coeff_v2_scaled = max(stats.coeff_v2_scaled, float(sc2.max()))
        if float(sc1.max()) > 2.0 * w:
            stats.violations["coeff_v1"] += 1
        if float(sc2.max()) > 4.0 * w:
            stats.violations["coeff_v2"] += 1

        parts = fh.core_partials(256)
        u, u_r, u_t, u_rr, u_rt, u_tt = parts
        bump("du_dr", float(np.abs(u_r).max()))
        bump("du_dtheta", float(np.abs(u_t).max()))
        bump("d2u_drdtheta", float(np.abs(u_rt).max()))
        bump("d2u_dr2", float(np.abs(u_rr).max()))
        bump("d2u_dtheta2", float(np.abs(u_tt).max()))
        bump("d2u_dtheta2_harmonicity", float(np.abs(u_tt).max()))
        stats.laplacian = max(stats.laplacian, float(np.abs(u_rr + u_tt).max()))
        stats.core_abs = max(stats.core_abs, float(np.abs(u).max()))
        stats.core_stretch = max(stats.core_stretch, float(np.exp(u).max()))

        b2 = pairing.term_b2(fh, ell, w, core_partials=parts)
        b3 = pairing.term_b3(fh, ell, w)
        stats.b2_eq = max(stats.b2_eq, b2.norm_eq)
        stats.b2_gr = max(stats.b2_gr, b2.norm_gr)
        stats.b3_eq = max(stats.b3_eq, b3.norm_eq)
        stats.eq_total = max(stats.eq_total, abs(b2.eq_signed + b3.eq_signed))
        stats.gr_offset_total = max(stats.gr_offset_total,
                                    abs(b2.gr_signed + b3.gr_center_offset))
        stats.deviation_sq = max(stats.deviation_sq, b3.deviation_sq_integral)
        eq_values.append(b2.norm_eq + b3.norm_eq)
    stats.mean_b2_b3_eq = float(np.mean(eq_values))
    return stats


def _normbound_sq_integral(ell: float, w: float = collar.W_CAP) -> float:
    """ell * (4 sqrt(2) w G pi^2 sigma / ell)^2, the squared deviation envelope."""
    sigma = collar.collar_decay_factor(ell)
    g = collar.core_stretch_bound(ell, w)
    return ell * (4.0 * math.sqrt(2.0) * w * g * math.pi**2 * sigma / ell) ** 2


def fourier_suite(config: SuiteConfig) -> list[ReportRow]:
    w = collar.W_CAP
    stats_list = _map_grid(config, lambda i, ell: run_tube_sweep(ell, i, config, w))
    rows: list[ReportRow] = []
    for st in stats_list:
        ell = st.ell
        rows.append(_le_row("fourier", "coeff_v1_decay", st.coeff_v1_scaled, 2.0 * w,
                            ell=ell, seed=config.seed, formula="|v1(k)| <= 2 W e^{-km}"))
        rows.append(_le_row("fourier", "coeff_v2_decay", st.coeff_v2_scaled, 4.0 * w,
                            ell=ell, seed=config.seed, formula="|v2(k)| <= 4 W e^{-km}"))
        for name in (*_PARTIAL_NAMES, "d2u_dtheta2_harmonicity"):
            value, bound = st.partial_sups[name]
            formula = fourier.DERIVATIVE_BOUND_FORMULAS.get(name, "2*W*e^m*(e^m+1)/(e^m-1)^3")
            rows.append(_le_row("fourier", name, value, bound, ell=ell,
                                seed=config.seed, formula=formula))
        rows.append(_le_row("fourier", "laplacian_residual", st.laplacian, 1e-10,
                            ell=ell, seed=config.seed))
        rows.append(_le_row("fourier", "core_sup_abs", st.core_abs, collar.CORE_SUP_CAP,
                            ell=ell, seed=config.seed, formula="|u(core)| <= 2.8"))
        rows.append(_le_row("fourier", "core_sup_stretch", st.core_stretch,
                            fourier.estcore_rhs(ell, w), ell=ell, seed=config.seed))
        q_m = math.exp(-st.m)
        tail = 6.0 * w * math.exp(-(st.k_fit + 1) * st.m) / (1.0 - q_m) if q_m > 0 else 0.0
        rows.append(_le_row("fourier", "boundary_reconstruction", st.reconstruction,
                            tail + 1e-12, ell=ell, seed=config.seed))
    return rows


def pairing_suite(config: SuiteConfig) -> list[ReportRow]:
    w = collar.W_CAP
    stats_list = _map_grid(config, lambda i, ell: run_tube_sweep(ell, i, config, w))
    rows: list[ReportRow] = []
    for st in stats_list:
        ell = st.ell
        q = collar.exp_neg_halfwidth(ell)
        sigma = collar.collar_decay_factor(ell)
        g = collar.core_stretch_bound(ell, w)
        eq_bound, gr_center, gr_bound = pairing.total_bounds(ell, w)
        rem = pairing.grafting_remainder_bound(ell, w)
        rows.append(_le_row("pairing", "flat_term_eq", st.b2_eq,
                            113.0 * math.pi**2 * q / ell, ell=ell, seed=config.seed,
                            formula="113 pi^2 e^{-m}/ell"))
        rows.append(_le_row("pairing", "flat_term_gr", st.b2_gr,
                            18.0 * math.pi**2 * q / ell, ell=ell, seed=config.seed,
                            formula="18 pi^2 e^{-m}/ell"))
        rows.append(_le_row("pairing", "ambient_term_eq", st.b3_eq,
                            8.0 * math.pi**4 * w**2 * g**2 * sigma**2 / ell,
                            ell=ell, seed=config.seed,
                            formula="8 pi^4 W^2 G^2 e^{2m}/(e^m-1)^4/ell"))
        rows.append(_le_row("pairing", "earthquake_total", st.eq_total, eq_bound,
                            ell=ell, seed=config.seed,
                            formula="8 pi^4 Gbar e^{-pi^2/ell}/ell + 113 pi^2 e^{-pi^2/(2ell)}/ell"))
        rows.append(_le_row("pairing", "grafting_center_offset", st.gr_offset_total, rem,
                            ell=ell, seed=config.seed,
                            formula="|gr - pi^2/ell - ell/4| <= decay tail"))
        rows.append(_le_row("pairing", "deviation_sq_integral", st.deviation_sq,
                            _normbound_sq_integral(ell, w), ell=ell, seed=config.seed,
                            formula="ell (4 sqrt2 W G pi^2 sigma/ell)^2"))
        rows.append(_le_row("pairing", "circulation_defect", st.circulation_defect, 1e-9,
                            ell=ell, seed=config.seed))
        b1_eq, b1_gr = pairing.term_b1(ell)
        rows.append(_eq_row("pairing", "rotational_term_eq", b1_eq, 0.0, 1e-12, ell=ell))
        rows.append(_eq_row("pairing", "rotational_term_gr", b1_gr, ell / 4.0, 1e-12,
                            ell=ell, formula="ell/4"))
        # RK4 development checks on a few tubes per core length.
        worst_closure, worst_mean, worst_speed = 0.0, 0.0, 0.0
        for t in range(min(3, config.trials)):
            fh = fourier.make_synthetic_tube(ell, trial_rng(config.seed, st.ell_index, t),
                                             w=w, K=config.modes)
            dev = fourier.develop_core(fh, ell, steps=4096)
            worst_closure = max(worst_closure, abs(dev.closure - 2.0j * math.pi))
            worst_mean = max(worst_mean, abs(dev.mean_velocity - 2.0j * math.pi / ell))
            worst_speed = max(worst_speed, dev.speed_residual(fh, ell))
        rows.append(_le_row("pairing", "develop_closure", worst_closure, 1e-6,
                            ell=ell, seed=config.seed, formula="closure = 2 pi i"))
        rows.append(_le_row("pairing", "develop_mean_velocity", worst_mean, 1e-6,
                            ell=ell, seed=config.seed, formula="mean = (2 pi/ell) i"))
        rows.append(_le_row("pairing", "develop_speed_residual", worst_speed, 1e-9,
                            ell=ell, seed=config.seed, formula="|w'| = e^u 2 pi/ell"))

    slope = decay_slope(stats_list)
    if slope is not None:
        rows.append(_le_row("pairing", "correction_decay_slope", slope, -0.9,
                            seed=config.seed,
                            formula="slope of log(correction) vs pi^2/(2 ell)"))
    return rows


def decay_slope(stats_list: list[TubeSweepStats],
                ell_range: tuple[float, float] = (0.0, 0.55)) -> float | None:
    """Least-squares slope of log mean correction size against pi^2/(2 ell)."""
    xs, ys = [], []
    for st in stats_list:
        if ell_range[0] < st.ell <= ell_range[1] and st.mean_b2_b3_eq > 0.0:
            xs.append(math.pi**2 / (2.0 * st.ell))
            ys.append(math.log(st.mean_b2_b3_eq))
    if len(xs) < 2:
        return None
    a = np.vstack([xs, np.ones(len(xs))]).T
    return float(np.linalg.lstsq(a, np.asarray(ys), rcond=None)[0][0])


# ---------------------------------------------------------------------------
# vrpath: grafting-path formulas


def vrpath_suite(config: SuiteConfig) -> list[ReportRow]:
    rows: list[ReportRow] = []
    for ell0 in config.ell_grid:
        rows.append(_le_row("vrpath", "integral_identity",
                            renorm.integral_identity_residual(ell0, 0.5 * ell0), 1e-8,
                            ell=ell0))
        upper, lower = renorm.grafting_length_bounds(ell0, math.pi)
        rows.append(_eq_row("vrpath", "envelope_ratio", upper / lower, 2.0, 1e-12, ell=ell0))
    upper, lower = renorm.grafting_length_bounds(1.0, math.pi)
    rows.append(_eq_row("vrpath", "envelope_upper_at_pi", upper, 0.5, 0.0, ell=1.0))
    rows.append(_eq_row("vrpath", "envelope_lower_at_pi", lower, 0.25, 0.0, ell=1.0))
    for ell0 in np.geomspace(0.2, tube.EPS0, 5):
        for s in np.linspace(0.0, 10.0, 5):
            rep = renorm.error_term_transfer_check(float(ell0), float(s))
            rows.append(ReportRow.from_bound("vrpath", rep, ell=float(ell0)))
    rows.append(_le_row("vrpath", "constant_consistency_142", 8.0 * 17.73, 142.0))
    table = renorm.vr_path_table(1.0, 12.0, 13)
    order_ok = all(r.ell_lower <= r.ell_upper for r in table)
    rows.append(_le_row("vrpath", "envelope_ordering", 0.0 if order_ok else 1.0, 0.0))
    peak = 6.0 / math.pi  # maximizer of e^{-pi s/2} s^3 at ell0 = 1
    tail = [r.error_envelope for r in table if r.s > peak]
    tail_ok = all(a >= b for a, b in zip(tail, tail[1:]))
    rows.append(_le_row("vrpath", "error_envelope_decay", 0.0 if tail_ok else 1.0, 0.0))
    return rows


# ---------------------------------------------------------------------------
# appendix: tensor identities and the Schwarzian bridge


def appendix_suite(config: SuiteConfig) -> list[ReportRow]:
    rows: list[ReportRow] = []
    rng = trial_rng(config.seed, 0, 1)
    pts = [complex(x, y) for x, y in zip(rng.uniform(-1.5, 1.5, 50), rng.uniform(0.4, 2.0, 50))]

    maps = {
        "mobius": halfplane.MobiusMap(1.0, 0.5j, 0.2, 1.0),
        "exp": halfplane.ExpMap(1.0),
        "composition": halfplane.CompositeMap(halfplane.ExpMap(0.5j), halfplane.scaling_map(0.3)),
    }
    for ell in config.ell_grid[:3]:
        maps[f"power_ell_{ell:.3f}"] = tube.symmetric_developing_map(ell)
    for name, f in maps.items():
        worst = max(osgood.bridge_residual(f, z) for z in pts)
        rows.append(_le_row("appendix", f"bridge_{name}", worst, 1e-6,
                            formula="Re S(f) = B(rho, f*|dz|^2)"))

    worst_add = 0.0
    for t in range(100):
        rng_t = trial_rng(config.seed, 1, t)
        u1 = osgood.random_trig_field(rng_t)
        u2 = osgood.random_trig_field(rng_t)
        p = complex(rng_t.uniform(-1.0, 1.0), rng_t.uniform(0.5, 2.0))
        worst_add = max(worst_add, osgood.additivity_residual(osgood.EUCLIDEAN, u1, u2, p))
        worst_add = max(worst_add,
                        osgood.additivity_residual(osgood.HYPERBOLIC_HALFPLANE, u1, u2, p))
    rows.append(_le_row("appendix", "full_tensor_additivity", worst_add, 1e-6,
                        seed=config.seed))

    spherical = osgood.standard_metric("spherical")
    euclid = osgood.standard_metric("euclidean")
    worst_sph = 0.0
    for z in [0j] + pts[:19]:
        full = osgood.os_full_tensor(osgood.EUCLIDEAN, spherical.log_factor, z)
        target = osgood.tensor_from_matrix(-0.5 * spherical.metric(z))
        worst_sph = max(worst_sph, full.max_abs_diff(target))
    rows.append(_le_row("appendix", "spherical_full_tensor", worst_sph, 1e-8,
                        formula="Bbar(eucl, sph) = -sph/2"))

    hyp = osgood.standard_metric("hyperbolic_halfplane")
    worst_std = max(osgood.standard_pair_residual(hyp, euclid, z) for z in pts[:20])
    rows.append(_le_row("appendix", "standard_pair_hyp_eucl", worst_std, 1e-8))
    mob = halfplane.MobiusMap(1.0, 0.3 + 0.1j, -0.2j, 1.0)
    sph2 = osgood.standard_metric("spherical", mobius=mob)
    worst_spsp = max(osgood.standard_pair_residual(spherical, sph2, z) for z in pts[:20])
    rows.append(_le_row("appendix", "standard_pair_spherical", worst_spsp, 1e-6))
    scaled = osgood.standard_metric("euclidean", scale=0.7)
    worst_scale = max(osgood.standard_pair_residual(euclid, scaled, z) for z in pts[:20])
    rows.append(_le_row("appendix", "standard_pair_scaled_euclidean", worst_scale, 1e-12))
    return rows


SUITES = {
    "symmetric": symmetric_suite,
    "bounds": bounds_suite,
    "fourier": fourier_suite,
    "pairing": pairing_suite,
    "vrpath": vrpath_suite,
    "appendix": appendix_suite,
}


def run_subcommand(name: str, config: SuiteConfig) -> ReportDocument:
    """Run one suite (or verify-all) and return the report document."""
    config.validate()
    if name == "verify-all":
        suite_names = list(SUITES)
    elif name in SUITES:
        suite_names = [name]
    else:
        raise ValueError(f"unknown subcommand {name!r}")
    doc = ReportDocument(version=VERSION, config=dict(echo=config.echo(), subcommand=name))
    for sname in suite_names:
        doc.rows.extend(SUITES[sname](config))
    return doc
