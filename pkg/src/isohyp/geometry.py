"""Poincare disk model of the hyperbolic plane.

The disk carries the conformal metric 4/(1-r^2)^2 times the Euclidean one,
so hyperbolic angles coincide with Euclidean angles and hyperbolic-unit
vectors have Euclidean norm (1-r^2)/2.

Conventions used throughout the package:

* ``e1`` is the horizontal axis (a geodesic), ``e2`` the vertical one.
* Fermi coordinates ``(s, t)``: ``s`` is the signed distance to ``e1``
  (positive above), ``t`` the signed distance along ``e1`` of the foot of
  the perpendicular geodesic.  Closed forms:
  ``sinh s = 2*x2/(1-r^2)`` and ``tanh t = 2*x1/(1+r^2)``.
* The frame ``{X, Xperp}``: ``X`` is the gradient of the signed distance
  to the axis (continuous across ``e1``), ``Xperp`` its counterclockwise
  rotation.  On both axes the pair is a positive rescaling of
  ``{(0,1), (-1,0)}``.
* Angles of unit vectors are measured in the frame as
  ``v = cos(a)*Xperp + sin(a)*X`` with ``a`` in ``(-pi, pi]``.  Thus
  ``a = pi/2`` means ``v = X`` and ``a = 0`` means ``v = Xperp``.
* Curves are arclength parametrized; the signed curvature satisfies
  ``kappa * gamma_dot_perp = D_t gamma_dot`` with ``perp`` the
  counterclockwise rotation, and the outward normal is
  ``nu = -gamma_dot_perp``.  A counterclockwise circle of hyperbolic
  radius ``tau`` centered at the origin has ``kappa = coth(tau)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional


class DomainError(ValueError):
    """A point or parameter left the open unit disk / valid range."""


# ---------------------------------------------------------------------------
# points and basic maps


@dataclass(frozen=True)
class DiskPoint:
    """Euclidean coordinates of a point in the open unit disk."""

    x1: float
    x2: float

    @property
    def z(self) -> complex:
        return complex(self.x1, self.x2)

    @property
    def r2(self) -> float:
        return self.x1 * self.x1 + self.x2 * self.x2

    @staticmethod
    def from_z(z: complex) -> "DiskPoint":
        return DiskPoint(z.real, z.imag)


ORIGIN = DiskPoint(0.0, 0.0)


def _require_inside(p: DiskPoint) -> None:
    if p.r2 >= 1.0:
        raise DomainError(f"point ({p.x1}, {p.x2}) is not inside the unit disk")


def dist(p: DiskPoint, q: DiskPoint) -> float:
    """Hyperbolic distance between two disk points.

    Radial case: dist(0, (r,0)) = 2*artanh(r).
    """
    _require_inside(p)
    _require_inside(q)
    num = abs(p.z - q.z)
    den = abs(1.0 - p.z.conjugate() * q.z)
    return 2.0 * math.atanh(num / den)


def dist_to_origin(p: DiskPoint) -> float:
    _require_inside(p)
    return 2.0 * math.atanh(math.sqrt(p.r2))


def conformal_factor(p: DiskPoint) -> float:
    """Scale of the hyperbolic metric: |v|_H = conformal_factor * |v|_flat."""
    return 2.0 / (1.0 - p.r2)


def gh_inner(p: DiskPoint, u: complex, v: complex) -> float:
    """Hyperbolic inner product of two tangent vectors given in disk components."""
    c = conformal_factor(p)
    return c * c * (u.real * v.real + u.imag * v.imag)


# ---------------------------------------------------------------------------
# Fermi coordinates about the axis e1


@dataclass(frozen=True)
class FermiCoords:
    """(s, t): signed distance to e1 and signed foot position along e1."""

    s: float
    t: float


def fermi_of(p: DiskPoint) -> FermiCoords:
    _require_inside(p)
    r2 = p.r2
    s = math.asinh(2.0 * p.x2 / (1.0 - r2))
    t = math.atanh(2.0 * p.x1 / (1.0 + r2))
    return FermiCoords(s, t)


def point_of(f: FermiCoords) -> DiskPoint:
    w = complex(0.0, math.tanh(0.5 * f.s))
    k = math.tanh(0.5 * f.t)
    z = (w + k) / (1.0 + k * w)
    return DiskPoint.from_z(z)


def rho_of_fermi(s: float, t: float) -> float:
    """Distance to the origin; hyperbolic Pythagoras cosh(rho) = cosh(s)cosh(t)."""
    return math.asinh(math.hypot(math.sinh(s) * math.cosh(t), math.sinh(t)))


def sinh_rho_of_fermi(s: float, t: float) -> float:
    return math.hypot(math.sinh(s) * math.cosh(t), math.sinh(t))


def leaf_parameter(s: float) -> float:
    """Euclidean height l at which the hypercycle leaf through height s meets e2."""
    return math.tanh(0.5 * s)


def leaf_curvature(s: float) -> float:
    """Curvature K1 of the hypercycle leaf at signed height s; equals tanh(s)."""
    return math.tanh(s)


# ---------------------------------------------------------------------------
# the frame {X, Xperp} and the radial frame {N, Nperp}


def rot90(v: complex) -> complex:
    """Counterclockwise rotation by pi/2 of a disk tangent vector."""
    return complex(-v.imag, v.real)


@dataclass(frozen=True)
class FramePacket:
    """Hyperbolic-unit frame data at a disk point.

    ``n`` and ``theta`` are None at the origin where the radial direction
    is undefined; everything else is defined on the whole disk.
    """

    x: complex
    xperp: complex
    n: Optional[complex]
    theta: Optional[float]
    k1: float


def frame_at(p: DiskPoint) -> FramePacket:
    _require_inside(p)
    r2 = p.r2
    one_m = 1.0 - r2
    q = math.hypot(one_m, 2.0 * p.x2)
    scale = one_m / q
    x = complex(scale * p.x1 * p.x2, scale * (0.5 * one_m + p.x2 * p.x2))
    xperp = rot90(x)
    s = math.asinh(2.0 * p.x2 / one_m)
    k1 = math.tanh(s)
    r = math.sqrt(r2)
    if r == 0.0:
        return FramePacket(x, xperp, None, None, k1)
    n = complex(0.5 * one_m * p.x1 / r, 0.5 * one_m * p.x2 / r)
    theta = math.atan2(n.real * x.real + n.imag * x.imag,
                       n.real * xperp.real + n.imag * xperp.imag)
    return FramePacket(x, xperp, n, theta, k1)


def frame_angle(p: DiskPoint, v: complex) -> float:
    """Angle of the tangent vector v measured from Xperp toward X, in (-pi, pi]."""
    f = frame_at(p)
    return math.atan2(v.real * f.x.real + v.imag * f.x.imag,
                      v.real * f.xperp.real + v.imag * f.xperp.imag)


def theta_of_fermi(s: float, t: float) -> float:
    """Frame angle of the radial direction N at Fermi coordinates (s, t)."""
    return math.atan2(math.sinh(s) * math.cosh(t), -math.sinh(t))


def nu_dot_n(s: float, t: float, alpha: float) -> float:
    """g_H(nu, N) for a curve with tangent angle alpha at Fermi (s, t).

    nu = -gamma_dot_perp is the outward normal; a counterclockwise circle
    centered at the origin gives +1.
    """
    sr = sinh_rho_of_fermi(s, t)
    if sr < 1e-300:
        return 0.0
    return (math.sinh(s) * math.cosh(t) * math.cos(alpha)
            + math.sinh(t) * math.sin(alpha)) / sr


def radial_dot_velocity(s: float, t: float, alpha: float) -> float:
    """g_H(N, gamma_dot) = cos(alpha - theta); positive means moving outward."""
    return math.cos(alpha - theta_of_fermi(s, t))


# ---------------------------------------------------------------------------
# curvature conversion and comparison circles


def curvature_convert(kappa_flat: float, p: DiskPoint, nu_flat: complex) -> float:
    """Hyperbolic signed curvature from the Euclidean one.

    ``nu_flat`` is the Euclidean-unit outward normal of the oriented curve
    (the Euclidean direction of nu = -gamma_dot_perp).
    """
    _require_inside(p)
    nrm = abs(nu_flat)
    if not math.isclose(nrm, 1.0, rel_tol=0.0, abs_tol=1e-9):
        raise DomainError("nu_flat must be a Euclidean unit vector")
    return 0.5 * (1.0 - p.r2) * kappa_flat + (p.x1 * nu_flat.real + p.x2 * nu_flat.imag)


class CircleKind(Enum):
    CIRCLE = "circle"
    LINE = "line"


@dataclass(frozen=True)
class OrientedCircle:
    """Oriented Euclidean circle (or straight line) used for curvature comparison.

    For CIRCLE kind the hyperbolic curvature is
    ``orientation * ((1-|c|^2)/radius + radius) / 2``; counterclockwise
    orientation is +1.  For LINE kind the data is a base point and a
    Euclidean-unit direction.
    """

    kind: CircleKind
    center: complex = 0j
    radius: float = 0.0
    orientation: int = 1
    point: complex = 0j
    direction: complex = 0j

    def hyperbolic_curvature(self) -> float:
        if self.kind is CircleKind.LINE:
            rp = rot90(self.direction)
            return -(self.point.real * rp.real + self.point.imag * rp.imag)
        c2 = abs(self.center) ** 2
        return self.orientation * 0.5 * ((1.0 - c2) / self.radius + self.radius)

    def hyperbolic_center_on_axis(self) -> Optional[float]:
        """Euclidean x1 of the hyperbolic center, for circles centered on e1
        and fully inside the disk; None otherwise."""
        if self.kind is CircleKind.LINE or abs(self.center.imag) > 1e-14:
            return None
        hi = self.center.real + self.radius
        lo = self.center.real - self.radius
        if hi >= 1.0 or lo <= -1.0:
            return None
        return math.tanh(0.5 * (math.atanh(hi) + math.atanh(lo)))

    def hyperbolic_radius(self) -> Optional[float]:
        """Hyperbolic radius, for circles centered on e1 inside the disk."""
        if self.kind is CircleKind.LINE or abs(self.center.imag) > 1e-14:
            return None
        hi = self.center.real + self.radius
        lo = self.center.real - self.radius
        if hi >= 1.0 or lo <= -1.0:
            return None
        return math.atanh(hi) - math.atanh(lo)


def circle_through(p: DiskPoint, tangent: complex, kappa_h: float) -> OrientedCircle:
    """Oriented Euclidean circle through p, tangent to ``tangent``, with the
    given hyperbolic signed curvature (traversal direction = tangent)."""
    _require_inside(p)
    v = tangent / abs(tangent)
    rp = rot90(v)
    kappa_flat = (kappa_h + (p.x1 * rp.real + p.x2 * rp.imag)) * 2.0 / (1.0 - p.r2)
    if abs(kappa_flat) < 1e-14:
        return OrientedCircle(kind=CircleKind.LINE, point=p.z, direction=v)
    center = p.z + rp / kappa_flat
    return OrientedCircle(kind=CircleKind.CIRCLE, center=center,
                          radius=1.0 / abs(kappa_flat),
                          orientation=1 if kappa_flat > 0 else -1)


def comparison_circle(p: DiskPoint, tangent: complex) -> Optional[OrientedCircle]:
    """The unique oriented Euclidean circle (or line) through p, tangent to
    the given direction, with Euclidean center on the x1-axis.

    Returns None for the underdetermined case: p on e1 with tangent
    perpendicular to e1, where callers must supply the continuity limit.
    Raises DomainError for the degenerate case of p on e1 with a
    transversal tangent (the circle collapses to a point).
    """
    _require_inside(p)
    if abs(tangent) == 0.0:
        raise DomainError("tangent must be nonzero")
    v = tangent / abs(tangent)
    on_axis = abs(p.x2) < 1e-15
    vertical = abs(v.real) < 1e-15
    if vertical:
        if on_axis:
            return None
        return OrientedCircle(kind=CircleKind.LINE, point=p.z, direction=v)
    if on_axis:
        raise DomainError("comparison circle degenerates at an axis point "
                          "with transversal tangent")
    c = p.x1 + p.x2 * v.imag / v.real
    radius = math.hypot(p.x1 - c, p.x2)
    rp = rot90(v)
    side = (c - p.x1) * rp.real + (0.0 - p.x2) * rp.imag
    return OrientedCircle(kind=CircleKind.CIRCLE, center=complex(c, 0.0),
                          radius=radius, orientation=1 if side > 0 else -1)


def comparison_curvature_trig(s: float, alpha: float) -> float:
    """kappa(C) by the hyperbolic law of cosines: cos(alpha)/tanh(s).

    Valid away from the axis; 0/0 at s = 0, alpha = +-pi/2 where callers
    use the continuity limit kappa(C) -> kappa_gamma.
    """
    return math.cos(alpha) / math.tanh(s)


def comparison_center_axis_position(s: float, t: float, alpha: float) -> float:
    """Signed axis position t_c of the hyperbolic center of the comparison
    circle: tanh(t - t_c) = tan(alpha) * sinh(s).  Requires kappa(C) > 1."""
    x = math.tan(alpha) * math.sinh(s)
    if abs(x) >= 1.0:
        raise DomainError("comparison circle has no hyperbolic center (kappa <= 1)")
    return t - math.atanh(x)


# ---------------------------------------------------------------------------
# isometries


@dataclass(frozen=True)
class MobiusTransform:
    """Real 2x2 Mobius map z -> (a z + b)/(c z + d) preserving the disk and e1."""

    a: float
    b: float
    c: float
    d: float

    @staticmethod
    def identity() -> "MobiusTransform":
        return MobiusTransform(1.0, 0.0, 0.0, 1.0)

    @staticmethod
    def translation_along_axis(distance: float) -> "MobiusTransform":
        """Hyperbolic translation along e1 moving the origin to signed
        distance ``distance``; fixes e1 and the frame {X, Xperp}."""
        k = math.tanh(0.5 * distance)
        return MobiusTransform(1.0, k, k, 1.0)

    def compose(self, other: "MobiusTransform") -> "MobiusTransform":
        """self after other: (self.compose(other))(z) = self(other(z))."""
        return MobiusTransform(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusTransform":
        return MobiusTransform(self.d, -self.b, -self.c, self.a)

    def apply_z(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def apply_point(self, p: DiskPoint) -> DiskPoint:
        _require_inside(p)
        return DiskPoint.from_z(self.apply_z(p.z))

    def apply_tangent(self, p: DiskPoint, v: complex) -> complex:
        """Pushforward of the tangent vector v at p."""
        det = self.a * self.d - self.b * self.c
        den = self.c * p.z + self.d
        return v * det / (den * den)


def translate_along_axis(distance: float) -> MobiusTransform:
    return MobiusTransform.translation_along_axis(distance)


@dataclass(frozen=True)
class PerpGeodesicReflection:
    """Reflection across the geodesic perpendicular to e1 with foot at t_foot.

    Orientation reversing; fixes e1 as a set, maps the frame to
    (X, -Xperp), so a curve angle alpha maps to pi - alpha (or -alpha
    after reversing the parametrization).
    """

    t_foot: float

    def _maps(self):
        t = MobiusTransform.translation_along_axis(self.t_foot)
        return t, t.inverse()

    def apply_point(self, p: DiskPoint) -> DiskPoint:
        t, tinv = self._maps()
        w = tinv.apply_z(p.z)
        return DiskPoint.from_z(t.apply_z(-w.conjugate()))

    def apply_tangent(self, p: DiskPoint, v: complex) -> complex:
        t, tinv = self._maps()
        w = tinv.apply_z(p.z)
        v1 = tinv.apply_tangent(p, v)
        v2 = -v1.conjugate()
        return t.apply_tangent(DiskPoint.from_z(-w.conjugate()), v2)


def unit_tangent_from_angle(p: DiskPoint, alpha: float) -> complex:
    """Euclidean direction of the hyperbolic-unit vector with frame angle alpha."""
    f = frame_at(p)
    v = math.cos(alpha) * f.xperp + math.sin(alpha) * f.x
    return v / abs(v)
