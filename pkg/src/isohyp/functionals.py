"""Weighted volume and perimeter of spherically symmetric sets in H^n.

Everything is computed from 2-dimensional generating data: a set that is
rotationally symmetric about the axis e1 is described either by a polar
boundary profile rho(theta) (theta measured from the positive axis, even
across e1), by a closed generating trajectory in the upper half-disk, or
by a polar occupancy grid.

All integrals carry the weight f = exp(h(rho)); the revolution factor for
the (n-2)-sphere of latitude is sinh(rho) sin(theta), which equals the
hyperbolic sine of the distance to the axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Tuple

import numpy as np
from scipy.integrate import quad

from .density import RadialDensity
from .geometry import DomainError

if TYPE_CHECKING:  # pragma: no cover
    from .shooting import Trajectory

QUAD_ABS_TOL = 1e-12


def sphere_area(n: int) -> float:
    """Area omega_{n-1} of the unit (n-1)-sphere: 2 pi^{n/2} / Gamma(n/2).

    Half-integer Gamma values are computed exactly by the sqrt(pi)
    recursion; integer ones by factorials.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n % 2 == 0:
        gamma = float(math.factorial(n // 2 - 1))
    else:
        gamma = math.sqrt(math.pi)
        k = 0.5
        while k < n / 2 - 0.25:
            gamma *= k
            k += 1.0
    return 2.0 * math.pi ** (n / 2) / gamma


@dataclass(frozen=True)
class BallQuantities:
    Pf: float
    Vf: float
    Hf: float
    err: float


def ball_quantities(n: int, d: RadialDensity, tau: float) -> BallQuantities:
    """Closed-form weighted perimeter, volume and mean curvature of the
    centered geodesic ball of radius tau."""
    if n < 2 or tau <= 0.0:
        raise ValueError("need n >= 2 and tau > 0")
    om = sphere_area(n)
    pf = om * math.sinh(tau) ** (n - 1) * d.weight(tau)
    vf, err = quad(lambda u: d.weight(u) * math.sinh(u) ** (n - 1), 0.0, tau,
                   epsabs=QUAD_ABS_TOL, epsrel=QUAD_ABS_TOL, limit=200)
    hf = (n - 1) / math.tanh(tau) + d.h(tau, 1)
    return BallQuantities(pf, om * vf, hf, om * err)


def ball_radius_for_volume(n: int, d: RadialDensity, v: float) -> float:
    """Radius tau with Vf(ball(tau)) = v, to relative 1e-10.

    Vf is strictly increasing (Vf' = Pf > 0) and onto (0, inf), so a
    bracket plus Brent iteration always converges.
    """
    if v <= 0.0:
        raise ValueError("volume must be positive")
    from scipy.optimize import brentq

    def gap(tau: float) -> float:
        return ball_quantities(n, d, tau).Vf - v

    lo, hi = 1e-8, 1.0
    while gap(hi) < 0.0:
        lo = hi
        hi *= 2.0
        if hi > 1e4:  # pragma: no cover - absurd volumes
            raise DomainError("volume out of supported range")
    if gap(lo) > 0.0:
        while gap(lo) > 0.0:
            hi = lo
            lo *= 0.5
    return float(brentq(gap, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200))


# ---------------------------------------------------------------------------
# polar profiles


@dataclass(frozen=True)
class PolarProfile:
    """Cosine-mode boundary profile rho(theta) = a0 + sum a_k cos(k theta).

    The cosine-only expansion makes the even symmetry across e1
    structural.  ``n`` is the ambient dimension of the revolved set.
    """

    coeffs: Tuple[float, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if self.n < 2:
            raise ValueError("n must be >= 2")

    def rho(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full_like(theta, self.coeffs[0])
        for k, a in enumerate(self.coeffs[1:], start=1):
            if a != 0.0:
                out = out + a * np.cos(k * theta)
        return out

    def rho_prime(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta)
        for k, a in enumerate(self.coeffs[1:], start=1):
            if a != 0.0:
                out = out - a * k * np.sin(k * theta)
        return out

    def rho_second(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta)
        for k, a in enumerate(self.coeffs[1:], start=1):
            if a != 0.0:
                out = out - a * k * k * np.cos(k * theta)
        return out

    def min_rho(self, grid: int = 2048) -> float:
        return float(np.min(self.rho(np.linspace(0.0, math.pi, grid))))

    def validate(self) -> None:
        if self.min_rho() <= 0.0:
            raise DomainError("profile radius must stay positive")

    def nonround_energy(self) -> float:
        """Fourier energy in the modes k >= 1."""
        return float(sum(a * a for a in self.coeffs[1:]))


def constant_profile(n: int, tau: float, modes: int = 0) -> PolarProfile:
    return PolarProfile((tau,) + (0.0,) * modes, n)


@dataclass(frozen=True)
class FunctionalResult:
    Pf: float
    Vf: float
    err: float

    def as_record(self) -> dict:
        return {"Pf": self.Pf, "Vf": self.Vf, "err": self.err}


def _revolution_power(n: int, base: float) -> float:
    # sin^{n-2} and (sinh rho sin theta)^{n-2} with the n = 2 convention 0^0 = 1
    if n == 2:
        return 1.0
    return base ** (n - 2)


def profile_functionals(p: PolarProfile, d: RadialDensity) -> FunctionalResult:
    """Weighted perimeter and volume of the revolution of a polar profile.

    Adaptive Gauss-Kronrod quadrature at absolute tolerance 1e-12; the
    returned err is the accumulated quadrature error estimate.
    """
    p.validate()
    n = p.n
    om = sphere_area(n - 1)
    gcache: dict = {}
    inner_err = [0.0]

    def cum(rho: float) -> float:
        got = gcache.get(rho)
        if got is None:
            got, e = quad(lambda u: d.weight(u) * math.sinh(u) ** (n - 1),
                          0.0, rho, epsabs=1e-13, epsrel=1e-13, limit=200)
            inner_err[0] = max(inner_err[0], e)
            gcache[rho] = got
        return got

    def per_integrand(theta: float) -> float:
        rho = float(p.rho(theta))
        rp = float(p.rho_prime(theta))
        fac = _revolution_power(n, math.sinh(rho) * math.sin(theta))
        return d.weight(rho) * fac * math.hypot(rp, math.sinh(rho))

    def vol_integrand(theta: float) -> float:
        return _revolution_power(n, math.sin(theta)) * cum(float(p.rho(theta)))

    pf, perr = quad(per_integrand, 0.0, math.pi,
                    epsabs=QUAD_ABS_TOL, epsrel=QUAD_ABS_TOL, limit=200)
    vf, verr = quad(vol_integrand, 0.0, math.pi,
                    epsabs=QUAD_ABS_TOL, epsrel=QUAD_ABS_TOL, limit=200)
    err = om * (perr + verr + math.pi * inner_err[0])
    return FunctionalResult(om * pf, om * vf, err)


# ---------------------------------------------------------------------------
# closed trajectories


def _axis_cap_integrals(n: int, d: RadialDensity, cum, t_axis: float,
                        kappa: float, side: float, s_gap: float):
    """(Pf, Vf) contributions of the untraversed sliver between the axis
    and the trajectory's end height.

    The sliver is modeled by the osculating perpendicular crossing: angle
    offset asin(kappa tanh s) and, for a proper circle, the exact foot law
    cosh(radius) = cosh(s) cosh(t - t_center); exact for centered circles
    and third-order accurate in general.
    """
    proper = kappa > 1.02
    if proper:
        r = math.atanh(1.0 / kappa)
        t_center = t_axis + side * r

    def state(s: float):
        if proper and math.cosh(r) >= math.cosh(s):
            t = t_center - side * math.acosh(math.cosh(r) / math.cosh(s))
        else:
            t = t_axis + side * 0.5 * kappa * s * s
        off = math.asin(max(-1.0, min(1.0, kappa * math.tanh(s))))
        alpha = 0.5 * math.pi - off if side < 0 else -0.5 * math.pi + off
        return t, alpha

    def per_integrand(s: float) -> float:
        t, alpha = state(s)
        rho = math.asinh(math.hypot(math.sinh(s) * math.cosh(t), math.sinh(t)))
        return (d.weight(rho) * _revolution_power(n, math.sinh(s))
                / max(1e-6, abs(math.sin(alpha))))

    def vol_integrand(s: float) -> float:
        t, alpha = state(s)
        sr = math.hypot(math.sinh(s) * math.cosh(t), math.sinh(t))
        if sr < 1e-14:
            return 0.0
        rho = math.asinh(sr)
        sin_theta = math.sinh(s) / sr  # polar angle from the positive axis
        nu_n = (math.sinh(s) * math.cosh(t) * math.cos(alpha)
                + math.sinh(t) * math.sin(alpha)) / sr
        return (_revolution_power(n, sin_theta) * cum(rho) * nu_n / sr
                / max(1e-6, abs(math.sin(alpha))))

    pf, _ = quad(per_integrand, 0.0, s_gap, epsabs=1e-13, epsrel=1e-13)
    vf, _ = quad(vol_integrand, 0.0, s_gap, epsabs=1e-13, epsrel=1e-13)
    return pf, vf


def trajectory_functionals(traj: "Trajectory", n: int,
                           d: RadialDensity) -> FunctionalResult:
    """Functionals of the revolution of a closed generating trajectory.

    The perimeter is the arclength integral of f * sinh(s)^{n-2}; the
    volume uses the Green-form path integral
    omega_{n-2} * int sin^{n-2}(theta) G(rho) dtheta along the curve,
    which is exact for any closed rectifiable boundary (the closing axis
    segment contributes nothing), star-shaped or not.  The small slivers
    between the launch/closure heights and the axis are added from the
    osculating crossing model.
    """
    if not traj.closure.closed:
        raise DomainError("trajectory does not close on e1")
    om = sphere_area(n - 1)
    total = traj.total_arclength

    gcache: dict = {}

    def cum(rho: float) -> float:
        got = gcache.get(rho)
        if got is None:
            got, _ = quad(lambda u: d.weight(u) * math.sinh(u) ** (n - 1),
                          0.0, rho, epsabs=1e-13, epsrel=1e-13, limit=200)
            gcache[rho] = got
        return got

    def per_integrand(u: float) -> float:
        s, t, _ = traj.state_at(u)
        rho = math.asinh(math.hypot(math.sinh(s) * math.cosh(t), math.sinh(t)))
        return d.weight(rho) * _revolution_power(n, math.sinh(abs(s)))

    def vol_integrand(u: float) -> float:
        s, t, alpha = traj.state_at(u)
        sr = math.hypot(math.sinh(s) * math.cosh(t), math.sinh(t))
        if sr < 1e-14:
            return 0.0
        rho = math.asinh(sr)
        sin_theta = math.sinh(s) / sr  # polar angle from the positive axis
        nu_n = (math.sinh(s) * math.cosh(t) * math.cos(alpha)
                + math.sinh(t) * math.sin(alpha)) / sr
        dtheta_du = nu_n / sr
        return _revolution_power(n, sin_theta) * cum(rho) * dtheta_du

    u0 = traj.states[0].u
    pf, perr = quad(per_integrand, u0, total, epsabs=1e-11, epsrel=1e-11,
                    limit=400)
    vf, verr = quad(vol_integrand, u0, total, epsabs=1e-11, epsrel=1e-11,
                    limit=400)

    # end caps: launch side and closure side
    s_launch, t_launch, _ = traj.state_at(u0)
    k_launch = traj.breakdown_at(u0).kappa_gamma
    p_cap, v_cap = _axis_cap_integrals(n, d, cum, traj.config.start_t,
                                       k_launch, -1.0, s_launch)
    pf += p_cap
    vf += v_cap
    s_end, _, _ = traj.state_at(total)
    k_end = traj.breakdown_at(total).kappa_gamma
    p_cap, v_cap = _axis_cap_integrals(n, d, cum, traj.closure.t_end,
                                       k_end, 1.0, s_end)
    pf += p_cap
    vf += v_cap
    return FunctionalResult(om * pf, om * vf, om * (perr + verr))


# ---------------------------------------------------------------------------
# occupancy grids and spherical symmetrization


def _sin_power_antiderivative(m: int, x: np.ndarray) -> np.ndarray:
    """int_0^x sin^m, exact recursion, vectorized."""
    x = np.asarray(x, dtype=float)
    if m == 0:
        return x.copy()
    if m == 1:
        return 1.0 - np.cos(x)
    lower = _sin_power_antiderivative(m - 2, x)
    return (-np.sin(x) ** (m - 1) * np.cos(x) + (m - 1) * lower) / m


class OccupancyGrid:
    """Polar occupancy grid over radius [0, r_max] x angle [0, 2 pi).

    ``occupancy[i, j]`` is the occupied fraction of the cell with radial
    index i and angular index j.  For n > 2 the grid carries the
    revolution (cap) measure sin^{n-2} of the colatitude, so that the
    symmetrization bookkeeping is exact for every dimension.
    """

    def __init__(self, r_max: float, occupancy: np.ndarray):
        occ = np.asarray(occupancy, dtype=float)
        if occ.ndim != 2 or occ.size == 0:
            raise DomainError("occupancy must be a nonempty 2-d array")
        if np.any(occ < -1e-12) or np.any(occ > 1.0 + 1e-12):
            raise DomainError("occupancy fractions must lie in [0, 1]")
        self.r_max = float(r_max)
        self.occupancy = np.clip(occ, 0.0, 1.0)

    @property
    def nr(self) -> int:
        return self.occupancy.shape[0]

    @property
    def ntheta(self) -> int:
        return self.occupancy.shape[1]

    def radial_edges(self) -> np.ndarray:
        return np.linspace(0.0, self.r_max, self.nr + 1)

    def angular_edges(self) -> np.ndarray:
        return np.linspace(0.0, 2.0 * math.pi, self.ntheta + 1)


def angular_cell_measures(grid: OccupancyGrid, n: int) -> np.ndarray:
    """Measure of each angular cell under the colatitude weight
    sin^{n-2}(pi - |pi - theta|); plain length for n = 2."""
    edges = grid.angular_edges()
    if n == 2:
        return np.diff(edges)
    # fold theta in [0, 2pi) onto the colatitude in [0, pi]
    anti: Callable[[np.ndarray], np.ndarray] = lambda x: _sin_power_antiderivative(n - 2, x)
    lo, hi = edges[:-1], edges[1:]
    out = np.empty(grid.ntheta)
    for j in range(grid.ntheta):
        a, b = lo[j], hi[j]
        if b <= math.pi:
            out[j] = float(anti(np.array([b]))[0] - anti(np.array([a]))[0])
        elif a >= math.pi:
            aa, bb = 2.0 * math.pi - b, 2.0 * math.pi - a
            out[j] = float(anti(np.array([bb]))[0] - anti(np.array([aa]))[0])
        else:
            top = float(anti(np.array([math.pi]))[0])
            out[j] = (top - float(anti(np.array([a]))[0])) + \
                     (top - float(anti(np.array([2.0 * math.pi - b]))[0]))
    return out


def radial_cell_measures(grid: OccupancyGrid, d: RadialDensity, n: int) -> np.ndarray:
    """Weighted radial measure of each annulus: int e^h sinh^{n-1}."""
    edges = grid.radial_edges()
    out = np.empty(grid.nr)
    for i in range(grid.nr):
        out[i], _ = quad(lambda u: d.weight(u) * math.sinh(u) ** (n - 1),
                         edges[i], edges[i + 1], epsabs=1e-13, epsrel=1e-13)
    return out


def grid_weighted_volume(grid: OccupancyGrid, d: RadialDensity, n: int) -> float:
    """Weighted volume carried by the grid (cap-measure arithmetic).

    For n = 2 this is the planar weighted area.  For n > 2 the full-angle
    grid double-covers the colatitudes, hence the factor omega_{n-2}/2.
    """
    mu = angular_cell_measures(grid, n)
    m = radial_cell_measures(grid, d, n)
    row_tot = grid.occupancy @ mu
    return 0.5 * sphere_area(n - 1) * float(m @ row_tot)


def _fill_cap(row: np.ndarray, mu: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Rearrange a row's occupied measure into a centered cap around theta=0."""
    target = float(np.dot(row, mu))
    dist = np.minimum(centers, 2.0 * math.pi - centers)
    order = np.argsort(dist, kind="stable")
    out = np.zeros_like(row)
    rem = target
    k = 0
    nth = len(order)
    while k < nth and rem > 0.0:
        # group a cell with its mirror partner when equidistant from 0
        group = [order[k]]
        if k + 1 < nth and abs(dist[order[k + 1]] - dist[order[k]]) < 1e-12:
            group.append(order[k + 1])
            k += 2
        else:
            k += 1
        gmu = float(sum(mu[j] for j in group))
        if gmu <= 0.0:
            continue
        take = min(rem, gmu)
        frac = take / gmu
        if frac > 1.0 - 1e-9:
            frac = 1.0
        elif frac < 1e-9:
            frac = 0.0
        for j in group:
            out[j] = frac
        rem -= take
    return out


def symmetrize(grid: OccupancyGrid, d: RadialDensity, n: int = 2) -> OccupancyGrid:
    """Spherical symmetrization: per radius annulus the occupied measure is
    rearranged into a single cap centered on the positive e1 axis.

    The weighted volume is preserved exactly at the level of the cap
    measure arithmetic; rows that are already caps are returned
    unchanged cellwise, making the operation idempotent.
    """
    mu = angular_cell_measures(grid, n)
    edges = grid.angular_edges()
    centers = 0.5 * (edges[:-1] + edges[1:])
    occ = grid.occupancy
    out = occ.copy()
    for i in range(grid.nr):
        filled = _fill_cap(occ[i], mu, centers)
        if np.max(np.abs(filled - occ[i])) > 1e-12:
            out[i] = filled
    return OccupancyGrid(grid.r_max, out)


def grid_perimeter_estimate(grid: OccupancyGrid, d: RadialDensity) -> float:
    """Report-grade weighted boundary length of the thresholded grid (n = 2).

    Counts the weighted lengths of cell interfaces between occupied and
    empty cells (occupancy thresholded at 1/2), including the outer rim.
    """
    b = grid.occupancy >= 0.5
    redges = grid.radial_edges()
    dtheta = 2.0 * math.pi / grid.ntheta
    arc = np.array([d.weight(r) * math.sinh(r) * dtheta for r in redges])
    seg = np.empty(grid.nr)
    for i in range(grid.nr):
        seg[i], _ = quad(d.weight, redges[i], redges[i + 1],
                         epsabs=1e-12, epsrel=1e-12)
    total = 0.0
    for i in range(grid.nr):
        diff_ang = b[i] != np.roll(b[i], -1)
        total += seg[i] * float(np.count_nonzero(diff_ang))
        if i + 1 < grid.nr:
            diff_rad = b[i] != b[i + 1]
            total += arc[i + 1] * float(np.count_nonzero(diff_rad))
        else:
            total += arc[grid.nr] * float(np.count_nonzero(b[i]))
    return total


def rasterize_trajectory(traj: "Trajectory", r_max: float, nr: int = 512,
                         ntheta: int = 1024,
                         samples: int = 4000) -> OccupancyGrid:
    """Occupancy grid of the region enclosed by a closed trajectory and e1.

    Even-odd crossing count along each polar ray of the upper half,
    mirrored across the axis.  Used as the rasterization fallback and as
    an independent cross-check of the path-integral functionals.
    """
    if not traj.closure.closed:
        raise DomainError("trajectory does not close on e1")
    us = np.linspace(0.0, traj.total_arclength, samples)
    rho = np.empty(samples)
    theta = np.empty(samples)
    for idx, u in enumerate(us):
        s, t, _ = traj.state_at(u)
        sr = math.hypot(math.sinh(s) * math.cosh(t), math.sinh(t))
        rho[idx] = math.asinh(sr)
        # polar position angle: sin = sinh(s)/sinh(rho), cos = sinh(t) cosh(s)/sinh(rho)
        theta[idx] = math.atan2(math.sinh(s), math.sinh(t) * math.cosh(s))
    half = ntheta // 2
    dtheta = 2.0 * math.pi / ntheta
    cols = (np.arange(half) + 0.5) * dtheta
    redges = np.linspace(0.0, r_max, nr + 1)
    occ = np.zeros((nr, ntheta))
    crossings: list = [[] for _ in range(half)]
    for a in range(samples - 1):
        t0, t1 = theta[a], theta[a + 1]
        r0, r1 = rho[a], rho[a + 1]
        lo, hi = (t0, t1) if t0 <= t1 else (t1, t0)
        j0 = int(np.ceil((lo - 0.5 * dtheta) / dtheta))
        j1 = int(np.floor((hi - 0.5 * dtheta) / dtheta))
        for j in range(max(j0, 0), min(j1, half - 1) + 1):
            tc = cols[j]
            if hi == lo:
                continue
            lam = (tc - t0) / (t1 - t0)
            if 0.0 <= lam <= 1.0:
                crossings[j].append(r0 + lam * (r1 - r0))
    for j in range(half):
        # a ray from the origin starts inside the enclosed region, so the
        # occupied radial set is [0, p1] u [p2, p3] u ... for sorted crossings
        pts = [0.0] + sorted(crossings[j])
        intervals = [(pts[k], pts[k + 1]) for k in range(0, len(pts) - 1, 2)]
        col = np.zeros(nr)
        for (a, b) in intervals:
            lo_i = np.searchsorted(redges, a, side="right") - 1
            hi_i = np.searchsorted(redges, b, side="right") - 1
            for i in range(max(lo_i, 0), min(hi_i, nr - 1) + 1):
                cell_lo, cell_hi = redges[i], redges[i + 1]
                col[i] += max(0.0, (min(b, cell_hi) - max(a, cell_lo))) / (cell_hi - cell_lo)
        col = np.clip(col, 0.0, 1.0)
        occ[:, j] = col
        occ[:, ntheta - 1 - j] = col
    return OccupancyGrid(r_max, occ)
