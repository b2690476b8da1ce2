"""Upper half-plane model: Moebius maps, holomorphic maps, and the Schwarzian engine.

Holomorphic maps expose derivatives to order 3, either in closed form or by
trapezoid-rule Cauchy integrals on a small circle (spectrally accurate).  The
Schwarzian derivative is the quadratic-differential coefficient

    S(f) = (f''/f')' - (1/2) (f''/f')^2  =  f'''/f' - (3/2) (f''/f')^2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, GridError, PoleError

_DET_TOL = 1e-12
_POLE_TOL = 1e-14
_DERIV_TOL = 1e-300


# ---------------------------------------------------------------------------
# Domains


class HalfPlaneDomain:
    """Open upper half-plane Im z > 0."""

    def contains(self, z: complex) -> bool:
        return z.imag > 0.0

    def boundary_distance(self, z: complex) -> float:
        return z.imag

    def __repr__(self) -> str:
        return "HalfPlaneDomain()"


HALF_PLANE = HalfPlaneDomain()


def hyperbolic_density(z: complex) -> float:
    """Density 1/(Im z)^2 of the hyperbolic metric on the upper half-plane."""
    y = complex(z).imag
    if y <= 0.0:
        raise DomainError(f"point {z!r} not in the upper half-plane")
    return 1.0 / (y * y)


# ---------------------------------------------------------------------------
# Moebius maps


@dataclass(frozen=True)
class MobiusMap:
    """Moebius transformation z -> (a z + b)/(c z + d), normalized to det 1.

    Construction rescales the coefficients so that ad - bc = 1; two maps are
    the same element of the Moebius group iff their normalized coefficients
    agree up to a global sign.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        det = self.a * self.d - self.b * self.c
        if abs(det) < _DET_TOL:
            raise DomainError("singular coefficient matrix for a Moebius map")
        s = cmath.sqrt(det)
        object.__setattr__(self, "a", self.a / s)
        object.__setattr__(self, "b", self.b / s)
        object.__setattr__(self, "c", self.c / s)
        object.__setattr__(self, "d", self.d / s)

    @property
    def domain(self):
        return HALF_PLANE

    def same_as(self, other: "MobiusMap", tol: float = 1e-12) -> bool:
        """Equality in the Moebius group (coefficients up to global sign)."""
        plus = max(
            abs(self.a - other.a), abs(self.b - other.b),
            abs(self.c - other.c), abs(self.d - other.d),
        )
        minus = max(
            abs(self.a + other.a), abs(self.b + other.b),
            abs(self.c + other.c), abs(self.d + other.d),
        )
        return min(plus, minus) <= tol

    def __call__(self, z: complex) -> complex:
        den = self.c * z + self.d
        if abs(den) < _POLE_TOL:
            raise PoleError(f"Moebius map has a pole at z={z!r}")
        return (self.a * z + self.b) / den

    def derivatives(self, z: complex) -> tuple[complex, complex, complex, complex]:
        den = self.c * z + self.d
        if abs(den) < _POLE_TOL:
            raise PoleError(f"Moebius map has a pole at z={z!r}")
        # det = 1, so f' = 1/den^2.
        d1 = 1.0 / den**2
        d2 = -2.0 * self.c / den**3
        d3 = 6.0 * self.c**2 / den**4
        return (self.a * z + self.b) / den, d1, d2, d3

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)


IDENTITY = MobiusMap(1.0, 0.0, 0.0, 1.0)


def mobius_apply(M: MobiusMap, z: complex) -> complex:
    return M(z)


def scaling_map(t: float) -> MobiusMap:
    """Hyperbolic isometry z -> e^t z (the earthquake lift), det-1 normalized."""
    s = math.exp(0.5 * t)
    return MobiusMap(s, 0.0, 0.0, 1.0 / s)


# ---------------------------------------------------------------------------
# Holomorphic maps with order-3 derivative access


@dataclass(frozen=True)
class PowerMap:
    """Principal-branch power map z -> z^alpha on the upper half-plane.

    Valid there because the branch cut of log lies on the negative reals.
    """

    alpha: complex
    domain: HalfPlaneDomain = field(default=HALF_PLANE, repr=False)

    def __call__(self, z: complex) -> complex:
        return cmath.exp(self.alpha * cmath.log(z))

    def derivatives(self, z: complex) -> tuple[complex, complex, complex, complex]:
        f = self(z)
        a = self.alpha
        d1 = a * f / z
        d2 = a * (a - 1.0) * f / z**2
        d3 = a * (a - 1.0) * (a - 2.0) * f / z**3
        return f, d1, d2, d3


@dataclass(frozen=True)
class ExpMap:
    """Map z -> lam * exp(z); Schwarzian identically -1/2."""

    lam: complex = 1.0
    domain: HalfPlaneDomain = field(default=HALF_PLANE, repr=False)

    def __call__(self, z: complex) -> complex:
        return self.lam * cmath.exp(z)

    def derivatives(self, z: complex) -> tuple[complex, complex, complex, complex]:
        f = self(z)
        return f, f, f, f


@dataclass(frozen=True)
class CompositeMap:
    """Composition outer(inner(z)); derivatives by the chain rule."""

    outer: object
    inner: object

    @property
    def domain(self):
        return getattr(self.inner, "domain", HALF_PLANE)

    def __call__(self, z: complex) -> complex:
        return self.outer(self.inner(z))

    def derivatives(self, z: complex) -> tuple[complex, complex, complex, complex]:
        g, g1, g2, g3 = self.inner.derivatives(z)
        f, f1, f2, f3 = self.outer.derivatives(g)
        d1 = f1 * g1
        d2 = f2 * g1**2 + f1 * g2
        d3 = f3 * g1**3 + 3.0 * f2 * g1 * g2 + f1 * g3
        return f, d1, d2, d3


@dataclass(frozen=True)
class SampledMap:
    """Holomorphic map known only through point evaluation.

    Derivatives come from trapezoid-rule Cauchy integrals on a circle of
    radius ``r_c`` (default min(0.25*dist(z, boundary), 0.1*Im z)) with
    ``nodes`` equispaced points; exact for polynomials of degree < nodes.
    """

    fn: Callable[[complex], complex]
    r_c: float | None = None
    nodes: int = 64
    domain: HalfPlaneDomain = field(default=HALF_PLANE, repr=False)

    def __call__(self, z: complex) -> complex:
        return self.fn(z)

    def circle_radius(self, z: complex) -> float:
        if self.r_c is not None:
            return self.r_c
        r = min(0.25 * self.domain.boundary_distance(z), 0.1 * abs(z.imag))
        if r <= 0.0:
            raise DomainError(f"differentiation circle degenerates at z={z!r}")
        return r

    def derivatives(self, z: complex) -> tuple[complex, complex, complex, complex]:
        r = self.circle_radius(z)
        zc = complex(z)
        if not self.domain.contains(zc) or zc.imag - r <= 0.0:
            raise DomainError(f"differentiation circle exits the domain at z={z!r}")
        phi = 2.0 * np.pi * np.arange(self.nodes) / self.nodes
        ring = np.exp(1j * phi)
        vals = np.asarray([self.fn(zc + r * w) for w in ring], dtype=complex)
        out: list[complex] = [self.fn(zc)]
        for n in (1, 2, 3):
            coeff = (vals * np.exp(-1j * n * phi)).mean()
            out.append(complex(coeff) * math.factorial(n) / r**n)
        return out[0], out[1], out[2], out[3]


HolomorphicMap = MobiusMap | PowerMap | ExpMap | CompositeMap | SampledMap


def schwarzian_from_derivatives(d1: complex, d2: complex, d3: complex) -> complex:
    """S = f'''/f' - (3/2)(f''/f')^2 from the first three derivatives."""
    if abs(d1) < _DERIV_TOL:
        raise PoleError("vanishing derivative: Schwarzian undefined")
    r = d2 / d1
    return d3 / d1 - 1.5 * r * r


def schwarzian(f: HolomorphicMap, z: complex) -> complex:
    """Schwarzian coefficient q(z) of S(f) = q dz^2 at z.

    Closed forms: Moebius -> 0, z^alpha -> (1-alpha^2)/(2 z^2), lam*e^z -> -1/2;
    compositions use the cocycle S(f o g) = S(f)(g) g'^2 + S(g); sampled maps
    fall back to Cauchy-circle differentiation.
    """
    if isinstance(f, MobiusMap):
        return 0.0 + 0.0j
    if isinstance(f, PowerMap):
        return (1.0 - f.alpha**2) / (2.0 * z * z)
    if isinstance(f, ExpMap):
        return complex(-0.5)
    if isinstance(f, CompositeMap):
        g = f.inner(z)
        g1 = f.inner.derivatives(z)[1]
        return schwarzian(f.outer, g) * g1**2 + schwarzian(f.inner, z)
    _, d1, d2, d3 = f.derivatives(z)
    return schwarzian_from_derivatives(d1, d2, d3)


def schwarzian_compose_residual(f: HolomorphicMap, g: HolomorphicMap, z: complex) -> float:
    """|S(f o g)(z) - (S(f)(g(z)) g'(z)^2 + S(g)(z))|.

    The left side is evaluated from the chain-rule derivatives of the
    composite (not the cocycle itself), so the residual is a genuine
    consistency check of the derivative engine.
    """
    comp = CompositeMap(f, g)
    _, d1, d2, d3 = comp.derivatives(z)
    lhs = schwarzian_from_derivatives(d1, d2, d3)
    gz = g(z)
    g1 = g.derivatives(z)[1]
    rhs = schwarzian(f, gz) * g1**2 + schwarzian(g, z)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Quadratic differentials and norms


@dataclass(frozen=True)
class QuadraticDifferential:
    """Coefficient q of a quadratic differential q(z) dz^2 on a domain."""

    coeff: Callable[[complex], complex]
    domain: HalfPlaneDomain = field(default=HALF_PLANE, repr=False)

    def __call__(self, z: complex) -> complex:
        return self.coeff(z)

    def cauchy_riemann_residual(self, points: Iterable[complex], h: float = 1e-5) -> float:
        """Max |d q / d zbar| over sample points, by central differences."""
        worst = 0.0
        for z in points:
            dqdx = (self.coeff(z + h) - self.coeff(z - h)) / (2.0 * h)
            dqdy = (self.coeff(z + 1j * h) - self.coeff(z - 1j * h)) / (2.0 * h)
            worst = max(worst, 0.5 * abs(dqdx + 1j * dqdy))
        return worst


def schwarzian_differential(f: HolomorphicMap) -> QuadraticDifferential:
    return QuadraticDifferential(lambda z: schwarzian(f, z))


@dataclass(frozen=True)
class GridSpec:
    """Polar sampling grid {r e^{i theta}} of the upper half-plane."""

    radii: Sequence[float]
    angles: Sequence[float]

    @classmethod
    def default(cls, n_radii: int = 64, n_angles: int = 64) -> "GridSpec":
        radii = np.geomspace(math.exp(-3.0), math.exp(3.0), n_radii)
        angles = np.linspace(0.0, math.pi, n_angles + 2)[1:-1]
        return cls(radii=radii, angles=angles)

    def points(self) -> np.ndarray:
        r = np.asarray(self.radii, dtype=float)
        t = np.asarray(self.angles, dtype=float)
        return (r[:, None] * np.exp(1j * t)[None, :]).ravel()


def infinity_norm_estimate(q: QuadraticDifferential, sampler: GridSpec | None = None) -> float:
    """Grid maximum of |q(z)| (Im z)^2, a lower bound for sup |q|/rho."""
    grid = (sampler or GridSpec.default()).points()
    if grid.size == 0:
        raise GridError("empty sampling grid")
    vals = np.asarray([abs(q(z)) * z.imag**2 for z in grid])
    return float(vals.max())


def kra_maskit_lower(delta: float) -> float:
    """Lower bound (1/2) coth^2(delta/2) for the norm when the image has injectivity radius delta."""
    if delta <= 0.0:
        raise DomainError("injectivity radius must be positive")
    return 0.5 / math.tanh(0.5 * delta) ** 2
