"""Rank-one symmetric space balls and the weighted hyperbolic correspondence.

For the complex/quaternionic hyperbolic spaces and the Cayley plane the
Jacobi operator of the radial field has eigenvalues {0, -1, -4}; radial
Jacobi fields grow like sinh(t) in the (-1)-directions and
sinh(t) cosh(t) in the (-4)-directions, so geodesic spheres of radius t
have area omega_{n-1} sinh^{n-1}(t) cosh^{d-1}(t) with d the real
dimension of the base field.  The same quantities arise in real
hyperbolic n-space weighted by cosh^{d-1} of the distance, which is the
bridge this module cross-checks numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from scipy.integrate import quad

from .density import RadialDensity, cosh_power, validate_strict
from .functionals import ball_quantities, sphere_area

_FIELD_DIM = {"R": 1, "C": 2, "H": 4, "O": 8}


@dataclass(frozen=True)
class SpaceParams:
    """(field, m) of a rank-one symmetric space H_K^m; n = d*m real dims."""

    field: str
    m: int

    def __post_init__(self):
        if self.field not in _FIELD_DIM:
            raise ValueError("field must be one of R, C, H, O")
        if self.m < 2:
            raise ValueError("m must be >= 2")
        if self.field == "O" and self.m != 2:
            raise ValueError("the octonionic case only has the plane, m = 2")

    @property
    def d(self) -> int:
        return _FIELD_DIM[self.field]

    @property
    def n(self) -> int:
        return self.d * self.m


def hopf_density(sp: SpaceParams) -> RadialDensity:
    """The weight cosh^{d-1} matching the unweighted problem in H_K^m.

    The real field gives the trivial (non-strict) reference density; it is
    constructible but rejected by the strictness validator.
    """
    return cosh_power(sp.d - 1)


def hopf_density_is_strict(sp: SpaceParams) -> bool:
    return validate_strict(hopf_density(sp)).passed


def ball_direct(sp: SpaceParams, tau: float) -> Tuple[float, float]:
    """(P, V) of the geodesic ball of radius tau in H_K^m, from the Jacobi
    field density sinh^{n-1} cosh^{d-1}."""
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    n, d = sp.n, sp.d
    om = sphere_area(n)
    p = om * math.sinh(tau) ** (n - 1) * math.cosh(tau) ** (d - 1)
    v, _ = quad(lambda t: math.sinh(t) ** (n - 1) * math.cosh(t) ** (d - 1),
                0.0, tau, epsabs=1e-12, epsrel=1e-12, limit=200)
    return p, om * v


def crosscheck(sp: SpaceParams, tau: float) -> Tuple[float, float]:
    """Relative (P, V) discrepancies between the direct rank-one formulas
    and the weighted hyperbolic ball with the hopf density."""
    p_direct, v_direct = ball_direct(sp, tau)
    b = ball_quantities(sp.n, hopf_density(sp), tau)
    return (abs(p_direct - b.Pf) / p_direct, abs(v_direct - b.Vf) / v_direct)
