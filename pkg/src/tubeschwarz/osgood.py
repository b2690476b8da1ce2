"""Osgood-Stowe tensors of conformal metric changes and the Schwarzian bridge.

For conformal metrics g and e^{2u} g the (traceless) Osgood-Stowe tensor is

    B(g, e^{2u} g) = Hess_g(u) - du (x) du - (1/2)(Lap u - |grad u|^2) g ,

and the full (non-traceless) variant, additive under composition of conformal
changes, is

    Bbar(g, e^{2u} g) = Hess_g(u) - du (x) du + (1/2)|grad u|^2 g .

For a locally injective holomorphic map f on the upper half-plane with
conformal factor u = log|f'| + log(Im z) (so that f^*|dz|^2 = e^{2u} rho),
the real part of the Schwarzian differential equals B(rho, e^{2u} rho); that
identity is what `bridge_residual` measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .halfplane import HolomorphicMap, MobiusMap, schwarzian

Point = complex | tuple[float, float]


def _as_pair(p: Point) -> tuple[float, float]:
    if isinstance(p, complex):
        return (p.real, p.imag)
    x, y = p
    return (float(x), float(y))


# ---------------------------------------------------------------------------
# Symmetric 2-tensors


@dataclass(frozen=True)
class SymTensor2:
    """Real symmetric (0,2)-tensor components in a declared chart."""

    t11: float
    t12: float
    t22: float
    chart: str = "xy"

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.t11, self.t12], [self.t12, self.t22]])

    def max_abs_diff(self, other: "SymTensor2") -> float:
        return max(
            abs(self.t11 - other.t11),
            abs(self.t12 - other.t12),
            abs(self.t22 - other.t22),
        )

    def max_abs(self) -> float:
        return max(abs(self.t11), abs(self.t12), abs(self.t22))

    def __add__(self, other: "SymTensor2") -> "SymTensor2":
        return SymTensor2(self.t11 + other.t11, self.t12 + other.t12,
                          self.t22 + other.t22, self.chart)

    def __sub__(self, other: "SymTensor2") -> "SymTensor2":
        return SymTensor2(self.t11 - other.t11, self.t12 - other.t12,
                          self.t22 - other.t22, self.chart)


def tensor_from_matrix(mat: np.ndarray, chart: str = "xy") -> SymTensor2:
    return SymTensor2(float(mat[0, 0]), 0.5 * float(mat[0, 1] + mat[1, 0]),
                      float(mat[1, 1]), chart)


def schwarzian_real_part_tensor(q: complex, chart: str = "xy") -> SymTensor2:
    """Components of Re(q dz^2) = q0 (dx^2 - dy^2) - q1 (dx dy + dy dx)."""
    return SymTensor2(q.real, -q.imag, -q.real, chart)


def pushforward_tensor(t: SymTensor2, jac: np.ndarray, chart: str = "xy") -> SymTensor2:
    """Pushforward under a map with real Jacobian `jac`: T'(v,w) = T(J^-1 v, J^-1 w)."""
    jinv = np.linalg.inv(np.asarray(jac, dtype=float))
    return tensor_from_matrix(jinv.T @ t.as_matrix() @ jinv, chart)


def holomorphic_jacobian(d1: complex) -> np.ndarray:
    """Real 2x2 Jacobian of a holomorphic map with derivative d1."""
    return np.array([[d1.real, -d1.imag], [d1.imag, d1.real]])


# ---------------------------------------------------------------------------
# Scalar fields with closed-form partials


@dataclass(frozen=True)
class ScalarField:
    """Scalar function with first and second partials in a fixed chart."""

    value: Callable[[float, float], float]
    grad: Callable[[float, float], tuple[float, float]]
    hess: Callable[[float, float], tuple[float, float, float]]  # (u_11, u_12, u_22)
    chart: str = "xy"

    def __add__(self, other: "ScalarField") -> "ScalarField":
        if self.chart != other.chart:
            raise DomainError("cannot add fields in different charts")

        def value(x, y):
            return self.value(x, y) + other.value(x, y)

        def grad(x, y):
            a, b = self.grad(x, y)
            c, d = other.grad(x, y)
            return (a + c, b + d)

        def hess(x, y):
            a = self.hess(x, y)
            b = other.hess(x, y)
            return (a[0] + b[0], a[1] + b[1], a[2] + b[2])

        return ScalarField(value, grad, hess, self.chart)

    def __neg__(self) -> "ScalarField":
        return ScalarField(
            lambda x, y: -self.value(x, y),
            lambda x, y: tuple(-g for g in self.grad(x, y)),
            lambda x, y: tuple(-h for h in self.hess(x, y)),
            self.chart,
        )

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        return self + (-other)

    def fd_residual(self, p: Point, h: float = 1e-5) -> float:
        """Max discrepancy of grad/hess against central differences of `value`."""
        x, y = _as_pair(p)
        v = self.value
        gx = (v(x + h, y) - v(x - h, y)) / (2 * h)
        gy = (v(x, y + h) - v(x, y - h)) / (2 * h)
        hxx = (v(x + h, y) - 2 * v(x, y) + v(x - h, y)) / h**2
        hyy = (v(x, y + h) - 2 * v(x, y) + v(x, y - h)) / h**2
        hxy = (v(x + h, y + h) - v(x + h, y - h) - v(x - h, y + h) + v(x - h, y - h)) / (4 * h**2)
        g = self.grad(x, y)
        hh = self.hess(x, y)
        return max(abs(gx - g[0]), abs(gy - g[1]),
                   abs(hxx - hh[0]), abs(hxy - hh[1]), abs(hyy - hh[2]))


def constant_field(c: float, chart: str = "xy") -> ScalarField:
    return ScalarField(
        lambda x, y: c,
        lambda x, y: (0.0, 0.0),
        lambda x, y: (0.0, 0.0, 0.0),
        chart,
    )


def log_im_field() -> ScalarField:
    """log(Im z) on the upper half-plane."""

    def value(x, y):
        return math.log(y)

    def grad(x, y):
        return (0.0, 1.0 / y)

    def hess(x, y):
        return (0.0, 0.0, -1.0 / y**2)

    return ScalarField(value, grad, hess)


def re_log_of_derivative_field(f: HolomorphicMap) -> ScalarField:
    """log|f'(z)| as a field on the plane, via Wirtinger calculus."""

    def pieces(x, y):
        z = complex(x, y)
        f0, d1, d2, d3 = f.derivatives(z)
        h = d2 / d1
        hp = d3 / d1 - h * h
        return h, hp

    def value(x, y):
        d1 = f.derivatives(complex(x, y))[1]
        return math.log(abs(d1))

    def grad(x, y):
        h, _ = pieces(x, y)
        return (h.real, -h.imag)

    def hess(x, y):
        _, hp = pieces(x, y)
        return (hp.real, -hp.imag, -hp.real)

    return ScalarField(value, grad, hess)


def re_log_field(f: HolomorphicMap) -> ScalarField:
    """log|f(z)| as a field (f nonvanishing where evaluated)."""

    def pieces(x, y):
        z = complex(x, y)
        f0, d1, d2, _ = f.derivatives(z)
        h = d1 / f0
        hp = d2 / f0 - h * h
        return h, hp

    def value(x, y):
        return math.log(abs(f(complex(x, y))))

    def grad(x, y):
        h, _ = pieces(x, y)
        return (h.real, -h.imag)

    def hess(x, y):
        _, hp = pieces(x, y)
        return (hp.real, -hp.imag, -hp.real)

    return ScalarField(value, grad, hess)


def log_one_plus_sq_field(f: HolomorphicMap) -> ScalarField:
    """log(1 + |f(z)|^2) as a field, via Wirtinger calculus."""

    def pieces(x, y):
        z = complex(x, y)
        f0, d1, d2, _ = f.derivatives(z)
        s = 1.0 + abs(f0) ** 2
        pz = f0.conjugate() * d1 / s
        pzz = f0.conjugate() * d2 / s - pz * pz
        pzzbar = abs(d1) ** 2 / s**2
        return pz, pzz, pzzbar

    def value(x, y):
        return math.log(1.0 + abs(f(complex(x, y))) ** 2)

    def grad(x, y):
        pz, _, _ = pieces(x, y)
        return (2.0 * pz.real, -2.0 * pz.imag)

    def hess(x, y):
        _, pzz, pzzbar = pieces(x, y)
        return (
            2.0 * pzz.real + 2.0 * pzzbar,
            -2.0 * pzz.imag,
            -2.0 * pzz.real + 2.0 * pzzbar,
        )

    return ScalarField(value, grad, hess)


def conformal_factor_of_map(f: HolomorphicMap) -> ScalarField:
    """u with f^*|dz|^2 = e^{2u} rho on the half-plane: u = log|f'| + log(Im z)."""
    return re_log_of_derivative_field(f) + log_im_field()


class _Identity:
    def __call__(self, z: complex) -> complex:
        return z

    def derivatives(self, z: complex):
        return z, 1.0 + 0.0j, 0.0j, 0.0j


IDENTITY_MAP = _Identity()


# ---------------------------------------------------------------------------
# Metric descriptors (closed-form Christoffel symbols per kind)


class FlatChartMetric:
    """Identity metric in its chart (euclidean plane or flat annulus)."""

    def __init__(self, chart: str = "xy"):
        self.chart = chart

    def metric(self, p: Point) -> np.ndarray:
        return np.eye(2)

    def christoffel(self, p: Point) -> np.ndarray:
        return np.zeros((2, 2, 2))


EUCLIDEAN = FlatChartMetric("xy")
FLAT_ANNULUS = FlatChartMetric("rtheta")


class FlatCylinderMetric:
    """|dz|^2 / r^2 on the punctured plane, polar chart (r, theta)."""

    chart = "polar"

    def metric(self, p: Point) -> np.ndarray:
        r, _ = _as_pair(p)
        return np.diag([1.0 / r**2, 1.0])

    def christoffel(self, p: Point) -> np.ndarray:
        r, _ = _as_pair(p)
        gamma = np.zeros((2, 2, 2))
        gamma[0, 0, 0] = -1.0 / r
        return gamma


class TubeHyperbolicMetric:
    """Collar metric d rho^2 + (ell/2 pi)^2 cosh^2(rho) d theta^2, chart (rho, theta)."""

    chart = "rhotheta"

    def __init__(self, ell: float):
        self.ell = float(ell)

    def metric(self, p: Point) -> np.ndarray:
        rho, _ = _as_pair(p)
        c = (self.ell / (2.0 * math.pi)) * math.cosh(rho)
        return np.diag([1.0, c * c])

    def christoffel(self, p: Point) -> np.ndarray:
        rho, _ = _as_pair(p)
        gamma = np.zeros((2, 2, 2))
        t = math.tanh(rho)
        gamma[1, 0, 1] = gamma[1, 1, 0] = t
        gamma[0, 1, 1] = -((self.ell / (2.0 * math.pi)) ** 2) * math.cosh(rho) * math.sinh(rho)
        return gamma


class ConformalMetric:
    """e^{2u} times a base metric; Christoffels by the conformal change rule."""

    def __init__(self, base, u: ScalarField, kind: str = "conformal"):
        self.base = base
        self.u = u
        self.kind = kind
        self.chart = base.chart

    @property
    def log_factor(self) -> ScalarField:
        return self.u

    def metric(self, p: Point) -> np.ndarray:
        x, y = _as_pair(p)
        return math.exp(2.0 * self.u.value(x, y)) * self.base.metric(p)

    def christoffel(self, p: Point) -> np.ndarray:
        x, y = _as_pair(p)
        g = self.base.metric(p)
        ginv = np.linalg.inv(g)
        du = np.asarray(self.u.grad(x, y))
        gamma = self.base.christoffel(p).copy()
        grad_vec = ginv @ du
        for k in range(2):
            for i in range(2):
                for j in range(2):
                    gamma[k, i, j] += (
                        (1.0 if k == i else 0.0) * du[j]
                        + (1.0 if k == j else 0.0) * du[i]
                        - g[i, j] * grad_vec[k]
                    )
        return gamma


def standard_metric(kind: str, mobius: MobiusMap | None = None, scale: float = 0.0):
    """Standard two-dimensional metrics as conformal multiples of |dz|^2.

    kind in {euclidean, hyperbolic_halfplane, spherical, flat_cylinder}; the
    spherical metric may be pulled back by a Moebius map, and the euclidean
    one rescaled by e^{2*scale}.
    """
    if kind == "euclidean":
        return ConformalMetric(EUCLIDEAN, constant_field(scale), kind="euclidean")
    if kind == "hyperbolic_halfplane":
        return ConformalMetric(EUCLIDEAN, -log_im_field(), kind="hyperbolic_halfplane")
    if kind == "flat_cylinder":
        return ConformalMetric(EUCLIDEAN, -re_log_field(IDENTITY_MAP), kind="flat_cylinder")
    if kind == "spherical":
        f = mobius if mobius is not None else IDENTITY_MAP
        u = constant_field(math.log(2.0)) - log_one_plus_sq_field(f)
        if mobius is not None:
            u = u + re_log_of_derivative_field(mobius)
        return ConformalMetric(EUCLIDEAN, u, kind="spherical")
    raise DomainError(f"unknown standard metric kind {kind!r}")


HYPERBOLIC_HALFPLANE = standard_metric("hyperbolic_halfplane")


# ---------------------------------------------------------------------------
# The tensors


def _hessian(g, u: ScalarField, p: Point) -> tuple[np.ndarray, np.ndarray]:
    x, y = _as_pair(p)
    du = np.asarray(u.grad(x, y))
    h11, h12, h22 = u.hess(x, y)
    raw = np.array([[h11, h12], [h12, h22]])
    gamma = g.christoffel(p)
    hess = raw - np.einsum("kij,k->ij", gamma, du)
    return hess, du


def os_tensor(g, u: ScalarField, p: Point) -> SymTensor2:
    """Traceless Osgood-Stowe tensor B(g, e^{2u} g) at p, chart components."""
    hess, du = _hessian(g, u, p)
    gm = g.metric(p)
    ginv = np.linalg.inv(gm)
    lap = float(np.tensordot(ginv, hess))
    grad_sq = float(du @ ginv @ du)
    mat = hess - np.outer(du, du) - 0.5 * (lap - grad_sq) * gm
    return tensor_from_matrix(mat, g.chart)


def os_full_tensor(g, u: ScalarField, p: Point) -> SymTensor2:
    """Full Osgood-Stowe tensor Bbar(g, e^{2u} g) at p; its traceless part is B."""
    hess, du = _hessian(g, u, p)
    gm = g.metric(p)
    ginv = np.linalg.inv(gm)
    grad_sq = float(du @ ginv @ du)
    mat = hess - np.outer(du, du) + 0.5 * grad_sq * gm
    return tensor_from_matrix(mat, g.chart)


def traceless_part(t: SymTensor2, g, p: Point) -> SymTensor2:
    gm = g.metric(p)
    ginv = np.linalg.inv(gm)
    tr = float(np.tensordot(ginv, t.as_matrix()))
    return tensor_from_matrix(t.as_matrix() - 0.5 * tr * gm, t.chart)


def g_trace(t: SymTensor2, g, p: Point) -> float:
    return float(np.tensordot(np.linalg.inv(g.metric(p)), t.as_matrix()))


def additivity_residual(g, u1: ScalarField, u2: ScalarField, p: Point) -> float:
    """Componentwise residual of Bbar(g, h3) = Bbar(g, h2) + Bbar(h2, h3).

    Here h2 = e^{2 u1} g and h3 = e^{2(u1+u2)} g; the middle term is evaluated
    in the base chart with the conformally changed Levi-Civita connection.
    """
    total = os_full_tensor(g, u1 + u2, p)
    first = os_full_tensor(g, u1, p)
    second = os_full_tensor(ConformalMetric(g, u1), u2, p)
    return (total - first - second).max_abs()


def bridge_residual(f: HolomorphicMap, p: complex) -> float:
    """Componentwise residual of Re(S(f)) = B(rho, f^*|dz|^2) at p in H^2."""
    if p.imag <= 0.0:
        raise DomainError("bridge check requires a point in the upper half-plane")
    q = schwarzian(f, p)
    lhs = schwarzian_real_part_tensor(q)
    rhs = os_tensor(HYPERBOLIC_HALFPLANE, conformal_factor_of_map(f), p)
    return lhs.max_abs_diff(rhs)


def random_trig_field(rng: np.random.Generator, n_terms: int = 4, scale: float = 0.3,
                      max_freq: int = 3, chart: str = "xy") -> ScalarField:
    """Random low-order trigonometric polynomial with closed-form partials."""
    amps = rng.uniform(-scale, scale, n_terms)
    js = rng.integers(-max_freq, max_freq + 1, n_terms)
    ks = rng.integers(-max_freq, max_freq + 1, n_terms)
    phases = rng.uniform(0.0, 2.0 * math.pi, n_terms)

    def value(x, y):
        return float(sum(a * math.cos(j * x + k * y + p)
                         for a, j, k, p in zip(amps, js, ks, phases)))

    def grad(x, y):
        gx = sum(-a * j * math.sin(j * x + k * y + p)
                 for a, j, k, p in zip(amps, js, ks, phases))
        gy = sum(-a * k * math.sin(j * x + k * y + p)
                 for a, j, k, p in zip(amps, js, ks, phases))
        return (float(gx), float(gy))

    def hess(x, y):
        hxx = sum(-a * j * j * math.cos(j * x + k * y + p)
                  for a, j, k, p in zip(amps, js, ks, phases))
        hxy = sum(-a * j * k * math.cos(j * x + k * y + p)
                  for a, j, k, p in zip(amps, js, ks, phases))
        hyy = sum(-a * k * k * math.cos(j * x + k * y + p)
                  for a, j, k, p in zip(amps, js, ks, phases))
        return (float(hxx), float(hxy), float(hyy))

    return ScalarField(value, grad, hess, chart)


def standard_pair_residual(g1, g2, p: Point) -> float:
    """Residual of the standard-metric identities for a pair of standard metrics.

    Always checks that the traceless tensor B(g1, g2) vanishes; when both
    metrics are spherical it additionally checks
    Bbar(g1, g2) = (1/2)(g1 - g2).
    """
    for g in (g1, g2):
        if getattr(g, "kind", None) not in {
            "euclidean", "hyperbolic_halfplane", "spherical", "flat_cylinder",
        }:
            raise DomainError("standard_pair_residual requires standard metric kinds")
    u = g2.log_factor - g1.log_factor
    res = os_tensor(g1, u, p).max_abs()
    if g1.kind == "spherical" and g2.kind == "spherical":
        full = os_full_tensor(g1, u, p)
        target = tensor_from_matrix(0.5 * (g1.metric(p) - g2.metric(p)))
        res = max(res, full.max_abs_diff(target))
    return res
