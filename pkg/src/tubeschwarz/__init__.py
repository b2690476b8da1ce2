"""Schwarzian derivatives on long hyperbolic tubes, at desk scale.

Submodules:

* `halfplane` -- Moebius maps, holomorphic maps with order-3 derivatives,
  the Schwarzian engine and its norms;
* `tube` -- scalar collar geometry of a short closed geodesic;
* `collar` -- the named closed-form bound functions (W, G, Gbar, ...);
* `osgood` -- Osgood-Stowe tensors, metric descriptors, the Schwarzian bridge;
* `fourier` -- harmonic conformal factors on the flat annulus, decay bounds,
  and development of the core circle;
* `pairing` -- earthquake/grafting pairing integrals and the three-term norm
  decomposition;
* `renorm` -- variation formulas for renormalized volume;
* `suites`, `cli`, `report` -- the verification sweeps and report emission.
"""

from .tube import EPS0, TubeParams, collar_width, flat_halfwidth

__version__ = "0.1.0"

__all__ = ["EPS0", "TubeParams", "collar_width", "flat_halfwidth", "__version__"]
