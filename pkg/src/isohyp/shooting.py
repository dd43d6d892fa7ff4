"""Constant weighted-mean-curvature generating curves by ODE shooting.

The generating curve gamma of a rotationally symmetric candidate set is
integrated in Fermi coordinates (s, t) with the unwrapped tangent angle
alpha as third state.  The dynamics follow from the frame curvature
identity  d(alpha)/du = K1(s) cos(alpha) - kappa_gamma  together with the
conserved weighted mean curvature

    lambda = kappa_gamma + (n-2) kappa(C) + h'(rho) <nu, N>,

where kappa(C) is the curvature of the comparison circle (center on the
axis) and nu the outward normal.  Shooting starts on the positive axis at
t = tau* with tangent X (alpha = pi/2) and records the tangent events of
the curl sequence: gamma_dot = Xperp (alpha = 0), -X (alpha = -pi/2) and
X again after the full wrap (alpha = -3 pi/2 in the lift).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .density import RadialDensity
from .geometry import (FermiCoords, curvature_convert, point_of, rot90,
                       sinh_rho_of_fermi, theta_of_fermi)

# switch radius for the axis-start singularity of kappa(C); inside the
# corner |cos a| < CUT, |s| < CUT the continuity limit kappa(C) = kappa_gamma
# is blended in (both branches agree to second order there)
_CORNER_CUT = 1e-4
_KAPPA_CAP = 1e8
_S_FLOOR = 1e-13
_LAUNCH_U = 1e-6
# The axis return is detected on a collar above e1: the comparison-circle
# term makes s = 0 a regular singular point that amplifies integration
# error like s^-(n-2), so the closure data is measured at the collar and
# corrected by the osculating-circle closure law
# alpha(s) = -pi/2 + asin(kappa_gamma * tanh(s)), which is exact for
# centered circles.  The collar event is gated on |alpha + pi/2| < 0.5 so
# that transversal curl dips pass through untouched; a hard floor stops
# genuinely crashing trajectories.
_AXIS_GATE = 0.5
_AXIS_FLOOR = 1e-7


def _axis_collar(n: int, step_tol: float) -> float:
    """Collar height keeping the amplified closure error near 1e-7.

    The variational growth toward the axis is (collar/s)^(n-2), so the
    measurement height must grow with the dimension; the cap keeps the
    collar inside the gate geometry (high n closures then need a tighter
    step_tol for 1e-6-grade defects).
    """
    if n <= 3:
        return 1e-2
    return min(0.45, max(1e-2, (step_tol / 1e-7) ** (1.0 / (n - 2))))


def lambda_for_ball(n: int, d: RadialDensity, tau: float) -> float:
    """Conserved H_f of the centered ball: (n-1) coth(tau) + h'(tau)."""
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    return (n - 1) / math.tanh(tau) + d.h(tau, 1)


@dataclass(frozen=True)
class ShootingConfig:
    n: int
    density: RadialDensity
    lam: float
    start_t: float
    step_tol: float = 1e-10
    max_arclength: float = 50.0
    rho_max: float = 15.0

    def __post_init__(self):
        if self.n < 2 or self.start_t <= 0.0 or self.max_arclength <= 0.0:
            raise ValueError("need n >= 2, start_t > 0, max_arclength > 0")


@dataclass(frozen=True)
class CurveState:
    fermi: FermiCoords
    alpha: float
    u: float


@dataclass(frozen=True)
class MeanCurvatureBreakdown:
    """H_f = kappa_gamma + (n-2) kappa_c + h1, exact by construction."""

    kappa_gamma: float
    kappa_c: float
    h1: float
    hf: float


class EventKind(Enum):
    HITS_XPERP = "hits_xperp"          # tangent reaches Xperp (alpha = 0)
    HITS_MINUS_X = "hits_minus_x"      # tangent reaches -X (alpha = -pi/2)
    HITS_PLUS_X = "hits_plus_x"        # tangent back to X (alpha = -3 pi/2 lifted)
    AXIS_CROSSING = "axis_crossing"


@dataclass(frozen=True)
class TangentEvent:
    kind: EventKind
    u: float
    state: CurveState


@dataclass(frozen=True)
class Closure:
    closed: bool
    closing_angle_defect: float
    curl_detected: bool
    axis_return: bool
    t_end: float          # axis position of the return, collar-extrapolated


class TrajectoryKind(Enum):
    CENTERED_CIRCLE = "CenteredCircle"
    CURL_SEQUENCE = "CurlSequence"
    ESCAPED = "Escaped"
    STEP_LIMIT = "StepLimit"


def _rhs_terms(cfg: ShootingConfig, s: float, t: float,
               alpha: float) -> Tuple[float, float, float]:
    """(kappa_gamma, kappa_c, h1) at a state, with the axis-corner blend."""
    n, lam, dens = cfg.n, cfg.lam, cfg.density
    sinh_s = math.sinh(s)
    cosh_t = math.cosh(t)
    sinh_t = math.sinh(t)
    sr = math.hypot(sinh_s * cosh_t, sinh_t)
    ca = math.cos(alpha)
    sa = math.sin(alpha)
    if sr < 1e-300:
        nu_n = 0.0
        rho = 0.0
    else:
        nu_n = (sinh_s * cosh_t * ca + sinh_t * sa) / sr
        rho = math.asinh(sr)
    h1 = dens.h(rho, 1) * nu_n
    if n == 2:
        kg = lam - h1
        kc = kg  # continuity value, not part of the n = 2 dynamics
        return kg, kc, h1
    k_limit = (lam - h1) / (n - 1)
    q = (ca / _CORNER_CUT) ** 2 + (s / _CORNER_CUT) ** 2
    if q >= 1.0:
        ts = math.tanh(s)
        if abs(ts) < _S_FLOOR:
            ts = math.copysign(_S_FLOOR, ts if ts != 0.0 else 1.0)
        kc = ca / ts
        if kc > _KAPPA_CAP:
            kc = _KAPPA_CAP
        elif kc < -_KAPPA_CAP:
            kc = -_KAPPA_CAP
    else:
        ts = s if abs(s) >= _S_FLOOR else math.copysign(_S_FLOOR, s if s != 0.0 else 1.0)
        kc = q * (ca / ts) + (1.0 - q) * k_limit
    kg = lam - (n - 2) * kc - h1
    return kg, kc, h1


def breakdown_at_state(cfg: ShootingConfig, s: float, t: float,
                       alpha: float) -> MeanCurvatureBreakdown:
    kg, kc, h1 = _rhs_terms(cfg, s, t, alpha)
    return MeanCurvatureBreakdown(kg, kc, h1, kg + (cfg.n - 2) * kc + h1)


def rhs(cfg: ShootingConfig, u: float, y) -> Tuple[float, float, float]:
    """State derivative (ds, dt, dalpha)/du of the generating curve."""
    s, t, alpha = float(y[0]), float(y[1]), float(y[2])
    kg, _, _ = _rhs_terms(cfg, s, t, alpha)
    ca = math.cos(alpha)
    return (math.sin(alpha), -ca / math.cosh(s), math.tanh(s) * ca - kg)


def _extrapolate_crossing(t_at: float, s_at: float, kappa: float,
                          side: float) -> float:
    """Axis position of the perpendicular crossing of the osculating circle
    through a point at height s_at with curvature kappa.

    Exact circle law when the circle is proper (kappa > 1 and the point
    lies within its radius); second-order expansion otherwise.  ``side``
    is +1 when the crossing sits at smaller t than the circle center
    (closure side), -1 on the launch side.
    """
    if kappa > 1.02:
        r = math.atanh(1.0 / kappa)
        ratio = math.cosh(r) / math.cosh(s_at)
        if ratio >= 1.0:
            t_center = t_at + side * math.acosh(ratio)
            return t_center - side * r
    return t_at - side * 0.5 * kappa * s_at * s_at


@dataclass
class Trajectory:
    config: ShootingConfig
    states: List[CurveState]
    events: List[TangentEvent]
    closure: Closure
    termination: str
    total_arclength: float
    _dense: object = field(repr=False, default=None)

    def state_at(self, u: float) -> Tuple[float, float, float]:
        """(s, t, alpha) from the dense output at arclength u."""
        u = min(max(u, self.states[0].u), self.total_arclength)
        y = self._dense(u)
        return float(y[0]), float(y[1]), float(y[2])

    def rho_at(self, u: float) -> float:
        s, t, _ = self.state_at(u)
        return math.asinh(sinh_rho_of_fermi(s, t))

    def breakdown_at(self, u: float) -> MeanCurvatureBreakdown:
        s, t, alpha = self.state_at(u)
        return breakdown_at_state(self.config, s, t, alpha)

    def max_rho_deviation(self, samples: int = 600) -> float:
        tau = self.config.start_t
        us = np.linspace(self.states[0].u, self.total_arclength, samples)
        return max(abs(self.rho_at(float(u)) - tau) for u in us)

    def first_outward_motion(self, threshold: float = 1e-9,
                             samples: int = 2000) -> Optional[float]:
        """First arclength where g_H(N, gamma_dot) > threshold (the radial
        monotonicity violation witness), refined by bisection."""
        us = np.linspace(self.states[0].u, self.total_arclength, samples)

        def value(u: float) -> float:
            s, t, alpha = self.state_at(u)
            return math.cos(alpha - theta_of_fermi(s, t)) - threshold

        prev_u = float(us[0])
        prev_v = value(prev_u)
        for u in us[1:]:
            v = value(float(u))
            if v > 0.0:
                if prev_v <= 0.0:
                    lo, hi = prev_u, float(u)
                    for _ in range(60):
                        mid = 0.5 * (lo + hi)
                        if value(mid) > 0.0:
                            hi = mid
                        else:
                            lo = mid
                    return hi
                return float(u)
            prev_u, prev_v = float(u), v
        return None

    def hf_drift(self, samples: int = 50, position_step: float = 1e-4) -> float:
        """Max deviation of H_f from lambda with kappa_gamma re-estimated
        geometrically by second finite differences of the disk positions."""
        cfg = self.config
        u_lo = self.states[0].u + 5.0 * position_step
        u_hi = self.total_arclength - 5.0 * position_step
        if u_hi <= u_lo:
            return 0.0
        worst = 0.0
        h = position_step
        for u in np.linspace(u_lo, u_hi, samples):
            pm = point_of(FermiCoords(*self.state_at(float(u) - h)[:2]))
            p0 = point_of(FermiCoords(*self.state_at(float(u))[:2]))
            pp = point_of(FermiCoords(*self.state_at(float(u) + h)[:2]))
            d1 = (pp.z - pm.z) / (2.0 * h)
            d2 = (pp.z - 2.0 * p0.z + pm.z) / (h * h)
            speed = abs(d1)
            if speed < 1e-12:
                continue
            kf = (d1.real * d2.imag - d1.imag * d2.real) / speed ** 3
            nu_flat = -rot90(d1) / speed
            kappa_geo = curvature_convert(kf, p0, nu_flat)
            s, t, alpha = self.state_at(float(u))
            b = breakdown_at_state(cfg, s, t, alpha)
            hf_geo = kappa_geo + (cfg.n - 2) * b.kappa_c + b.h1
            worst = max(worst, abs(hf_geo - cfg.lam))
        return worst


def shoot(cfg: ShootingConfig) -> Trajectory:
    """Integrate the generating curve from (s=0, t=tau*, alpha=pi/2).

    A second-order series launch steps off the axis singularity; adaptive
    RK45 with dense output integrates until axis return, curl completion,
    domain exit or the arclength cap, locating tangent events by sign
    change and root refinement.
    """
    dens = cfg.density
    kappa0 = (cfg.lam - dens.h(cfg.start_t, 1)) / (cfg.n - 1)
    u0 = _LAUNCH_U
    y0 = [u0, cfg.start_t - 0.5 * kappa0 * u0 * u0, 0.5 * math.pi - kappa0 * u0]

    def f(u, y):
        return rhs(cfg, u, y)

    collar = _axis_collar(cfg.n, cfg.step_tol)

    def ev_axis(u, y):
        # fires when the state enters the closure box {s < collar, alpha
        # near -pi/2}; transversal dips keep |alpha + pi/2| large and pass
        return max(y[0] - collar, abs(y[2] + 0.5 * math.pi) - _AXIS_GATE)

    ev_axis.terminal = True
    ev_axis.direction = -1.0

    def ev_floor(u, y):
        return y[0] - _AXIS_FLOOR

    ev_floor.terminal = True
    ev_floor.direction = -1.0

    def ev_domain(u, y):
        return cfg.rho_max - math.asinh(
            math.hypot(math.sinh(y[0]) * math.cosh(y[1]), math.sinh(y[1])))

    ev_domain.terminal = True
    ev_domain.direction = -1.0

    def ev_hits_xperp(u, y):
        return y[2]

    ev_hits_xperp.terminal = False
    ev_hits_xperp.direction = -1.0

    def ev_hits_minus_x(u, y):
        return y[2] + 0.5 * math.pi

    ev_hits_minus_x.terminal = False
    ev_hits_minus_x.direction = -1.0

    def ev_hits_plus_x(u, y):
        return y[2] + 1.5 * math.pi

    ev_hits_plus_x.terminal = True
    ev_hits_plus_x.direction = -1.0

    sol = solve_ivp(f, (u0, cfg.max_arclength), y0, method="RK45",
                    rtol=cfg.step_tol, atol=cfg.step_tol * 1e-2,
                    dense_output=True,
                    events=[ev_axis, ev_floor, ev_domain, ev_hits_xperp,
                            ev_hits_minus_x, ev_hits_plus_x])

    states = [CurveState(FermiCoords(float(s), float(t)), float(a), float(u))
              for u, s, t, a in zip(sol.t, sol.y[0], sol.y[1], sol.y[2])]

    events: List[TangentEvent] = []
    kinds = [EventKind.AXIS_CROSSING, EventKind.AXIS_CROSSING, None,
             EventKind.HITS_XPERP, EventKind.HITS_MINUS_X, EventKind.HITS_PLUS_X]
    for idx, kind in enumerate(kinds):
        if kind is None:
            continue
        for u, y in zip(sol.t_events[idx], sol.y_events[idx]):
            events.append(TangentEvent(
                kind, float(u),
                CurveState(FermiCoords(float(y[0]), float(y[1])),
                           float(y[2]), float(u))))
    events.sort(key=lambda e: e.u)

    collar_hit = len(sol.t_events[0]) > 0
    floor_hit = len(sol.t_events[1]) > 0
    axis_return = collar_hit or floor_hit
    curl = len(sol.t_events[5]) > 0
    if collar_hit:
        y_end = sol.y_events[0][-1]
        s_end, t_coll, a_end = (float(y_end[0]), float(y_end[1]),
                                float(y_end[2]))
        kg_end, _, _ = _rhs_terms(cfg, s_end, t_coll, a_end)
        expected = math.asin(max(-1.0, min(1.0, kg_end * math.tanh(s_end))))
        defect = abs(a_end + 0.5 * math.pi - expected)
        t_end = _extrapolate_crossing(t_coll, s_end, kg_end, side=1.0)
    elif floor_hit:
        y_end = sol.y_events[1][-1]
        defect = abs(float(y_end[2]) + 0.5 * math.pi)
        t_end = float(y_end[1])
    else:
        defect = math.inf
        t_end = float(sol.y[1][-1])
    closure = Closure(closed=collar_hit and defect < 1e-6,
                      closing_angle_defect=defect,
                      curl_detected=curl, axis_return=axis_return,
                      t_end=t_end)

    if sol.status == 1:
        if curl:
            termination = "curl_complete"
        elif axis_return:
            termination = "axis_return"
        else:
            termination = "domain_exit"
    elif sol.status == 0:
        termination = "max_arclength"
    else:
        termination = "stiff"

    return Trajectory(config=cfg, states=states, events=events,
                      closure=closure, termination=termination,
                      total_arclength=float(sol.t[-1]), _dense=sol.sol)


@dataclass(frozen=True)
class Classification:
    kind: TrajectoryKind
    rho_deviation: float
    closing_angle_defect: float
    monotonicity_violation_u: Optional[float]
    event_order_ok: bool


def ordered_curl_events(traj: Trajectory) -> Optional[Tuple[float, float, float]]:
    """Arclengths of the first Xperp, -X and X tangencies, or None when the
    ordered triple is not present."""
    firsts = {}
    for e in traj.events:
        if e.kind not in firsts and e.kind is not EventKind.AXIS_CROSSING:
            firsts[e.kind] = e.u
    try:
        u_xperp = firsts[EventKind.HITS_XPERP]
        u_minus_x = firsts[EventKind.HITS_MINUS_X]
        u_plus_x = firsts[EventKind.HITS_PLUS_X]
    except KeyError:
        return None
    if u_xperp < u_minus_x < u_plus_x:
        return (u_xperp, u_minus_x, u_plus_x)
    return None


def classify(traj: Trajectory, tol: float = 1e-6) -> Classification:
    """CenteredCircle / CurlSequence / Escaped / StepLimit with witnesses."""
    rho_dev = traj.max_rho_deviation()
    defect = traj.closure.closing_angle_defect
    witness = traj.first_outward_motion()
    triple = ordered_curl_events(traj)
    if traj.closure.axis_return and rho_dev < tol and defect < tol:
        kind = TrajectoryKind.CENTERED_CIRCLE
    elif triple is not None and traj.closure.curl_detected:
        kind = TrajectoryKind.CURL_SEQUENCE
    elif traj.termination in ("axis_return", "domain_exit", "curl_complete"):
        kind = TrajectoryKind.ESCAPED
    else:
        kind = TrajectoryKind.STEP_LIMIT
    return Classification(kind=kind, rho_deviation=rho_dev,
                          closing_angle_defect=defect,
                          monotonicity_violation_u=witness,
                          event_order_ok=triple is not None or not traj.closure.curl_detected)
