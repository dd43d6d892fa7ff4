"""Volume-constrained minimization of the weighted perimeter over polar
profiles.

Profiles are cosine series rho(theta) = a0 + sum a_k cos(k theta), which
builds in the reflection symmetry across the axis; translations along the
axis remain representable and are legitimate competitors.  The descent is
projected gradient with backtracking line search; the volume constraint
is restored after every step by a Newton solve in the a0 direction.

The functionals and their coefficient-space gradients are evaluated on
fixed Gauss-Legendre grids (spectrally accurate for these smooth
integrands and exactly consistent between value and gradient); the
adaptive-quadrature path in :mod:`isohyp.functionals` provides the
independent accurate numbers for reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .density import RadialDensity
from .functionals import (PolarProfile, ball_quantities,
                          ball_radius_for_volume, profile_functionals,
                          sphere_area)
from .geometry import DiskPoint, DomainError, comparison_circle
from .shooting import MeanCurvatureBreakdown

_N_THETA = 384
_N_RADIAL = 48


class _Workspace:
    """Quadrature nodes and cosine design matrices for a mode count."""

    def __init__(self, modes: int, n: int, d: RadialDensity):
        self.n = n
        self.d = d
        nodes, weights = np.polynomial.legendre.leggauss(_N_THETA)
        self.theta = 0.5 * math.pi * (nodes + 1.0)
        self.w = 0.5 * math.pi * weights
        rn, rw = np.polynomial.legendre.leggauss(_N_RADIAL)
        self.x = 0.5 * (rn + 1.0)
        self.xw = 0.5 * rw
        k = np.arange(modes + 1)
        self.cos = np.cos(np.outer(self.theta, k))
        self.sin_k = np.sin(np.outer(self.theta, k)) * k
        self.sin_theta = np.sin(self.theta)
        self.om = sphere_area(n - 1)

    def _h(self, u: np.ndarray, order: int = 0) -> np.ndarray:
        dens = self.d
        if dens.family == "cosh":
            p = dens.params[0]
            if order == 0:
                return p * np.log(np.cosh(u))
            return p * np.tanh(u) if order == 1 else p / np.cosh(u) ** 2
        if dens.family == "quad":
            c = dens.params[0]
            return (c * u * u, 2.0 * c * u, 2.0 * c)[order]
        out = np.zeros_like(u)
        for j, c in enumerate(dens.params):
            kk = 2 * (j + 1)
            if order == 0:
                out += c * u ** kk
            elif order == 1:
                out += c * kk * u ** (kk - 1)
            else:
                out += c * kk * (kk - 1) * u ** (kk - 2)
        return out

    def values_and_grads(self, coeffs: np.ndarray):
        """(Pf, Vf, gradP, gradV) at the coefficient vector."""
        n = self.n
        rho = self.cos @ coeffs
        if np.any(rho <= 1e-3):
            raise DomainError("profile radius collapsed")
        rho_p = -(self.sin_k @ coeffs)
        sinh_r = np.sinh(rho)
        cosh_r = np.cosh(rho)
        eh = np.exp(self._h(rho))
        hp = self._h(rho, 1)
        w = np.hypot(rho_p, sinh_r)
        if n == 2:
            pw = np.ones_like(rho)
        else:
            pw = (sinh_r * self.sin_theta) ** (n - 2)
        f_per = eh * pw * w
        pf = self.om * float(self.w @ f_per)
        df_drho = f_per * (hp + (n - 2) * cosh_r / sinh_r
                           + sinh_r * cosh_r / (w * w))
        df_drhop = f_per * rho_p / (w * w)
        grad_p = self.om * ((self.w * df_drho) @ self.cos
                            - (self.w * df_drhop) @ self.sin_k)

        # inner radial integral on the scaled Gauss grid
        u = rho[:, None] * self.x[None, :]
        fin = np.exp(self._h(u)) * np.sinh(u) ** (n - 1)
        g_of_rho = rho * (fin @ self.xw)
        if n == 2:
            swt = np.ones_like(rho)
        else:
            swt = self.sin_theta ** (n - 2)
        vf = self.om * float(self.w @ (swt * g_of_rho))
        f_rho = np.exp(self._h(rho)) * sinh_r ** (n - 1)
        grad_v = self.om * ((self.w * swt * f_rho) @ self.cos)
        return pf, vf, grad_p, grad_v


def _project_volume(ws: _Workspace, coeffs: np.ndarray, target: float,
                    rel_tol: float = 1e-13) -> np.ndarray:
    """Restore Vf = target by a Newton solve in the a0 direction."""
    a = coeffs.copy()
    for _ in range(60):
        _, vf, _, grad_v = ws.values_and_grads(a)
        gap = vf - target
        if abs(gap) <= rel_tol * target:
            return a
        a[0] -= gap / grad_v[0]
    raise DomainError("volume projection did not converge")


@dataclass(frozen=True)
class MinimizeConfig:
    n: int
    density: RadialDensity
    target_volume: float
    modes: int = 16
    init: Optional[PolarProfile] = None
    max_iters: int = 400
    grad_tol: float = 1e-6
    seed: int = 0
    init_amplitude: float = 0.1

    def __post_init__(self):
        if self.target_volume <= 0.0:
            raise ValueError("target volume must be positive")


@dataclass
class MinimizeReport:
    final: PolarProfile
    Pf_history: List[float]
    Vf_drift: float
    deficit: float
    nonround_energy: float
    converged: bool
    iterations: int
    grad_norm: float
    line_search_failed: bool

    def as_record(self) -> dict:
        return {
            "final_coeffs": list(self.final.coeffs),
            "Pf_history": self.Pf_history,
            "Vf_drift": self.Vf_drift,
            "deficit": self.deficit,
            "nonround_energy": self.nonround_energy,
            "converged": self.converged,
            "iterations": self.iterations,
            "grad_norm": self.grad_norm,
            "line_search_failed": self.line_search_failed,
        }


def random_feasible_profile(n: int, d: RadialDensity, target_volume: float,
                            modes: int, amplitude: float,
                            rng: np.random.Generator) -> PolarProfile:
    """Ball profile at the target volume with a random cosine perturbation,
    re-projected to the exact volume."""
    tau = ball_radius_for_volume(n, d, target_volume)
    coeffs = np.zeros(modes + 1)
    coeffs[0] = tau
    k_active = min(8, modes)
    if k_active > 0 and amplitude > 0.0:
        raw = rng.uniform(-1.0, 1.0, size=k_active)
        coeffs[1:k_active + 1] = amplitude * raw / max(1.0, np.abs(raw).sum())
    ws = _Workspace(modes, n, d)
    coeffs = _project_volume(ws, coeffs, target_volume)
    return PolarProfile(tuple(coeffs), n)


def profile_mean_curvature(p: PolarProfile, d: RadialDensity,
                           theta: float) -> MeanCurvatureBreakdown:
    """Weighted mean-curvature breakdown of the revolved profile boundary
    at polar angle theta in (0, pi); endpoints use the symmetry limit
    kappa(C) = kappa of the curve."""
    rho = float(p.rho(theta))
    rho_p = float(p.rho_prime(theta))
    rho_pp = float(p.rho_second(theta))
    sinh_r, cosh_r = math.sinh(rho), math.cosh(rho)
    w = math.hypot(rho_p, sinh_r)
    kappa = (cosh_r * sinh_r * sinh_r + 2.0 * rho_p * rho_p * cosh_r
             - rho_pp * sinh_r) / w ** 3
    nu_n = sinh_r / w
    h1 = d.h(rho, 1) * nu_n
    e = math.tanh(0.5 * rho)
    z = complex(e * math.cos(theta), e * math.sin(theta))
    dz = (0.5 * rho_p / math.cosh(0.5 * rho) ** 2
          * complex(math.cos(theta), math.sin(theta)) + 1j * z)
    circ = comparison_circle(DiskPoint(z.real, z.imag), dz)
    kappa_c = kappa if circ is None else circ.hyperbolic_curvature()
    return MeanCurvatureBreakdown(kappa, kappa_c, h1,
                                  kappa + (p.n - 2) * kappa_c + h1)


def gradient(p: PolarProfile, d: RadialDensity,
             target_volume: float) -> Tuple[np.ndarray, float]:
    """Volume-projected perimeter gradient in coefficient space and the
    Lagrange multiplier mu = <gradP, gradV>/|gradV|^2."""
    ws = _Workspace(len(p.coeffs) - 1, p.n, d)
    _, _, grad_p, grad_v = ws.values_and_grads(np.asarray(p.coeffs))
    denom = float(grad_v @ grad_v)
    if denom <= 0.0:
        raise DomainError("degenerate volume gradient")
    mu = float(grad_p @ grad_v) / denom
    return grad_p - mu * grad_v, mu


def functionals_fast(p: PolarProfile, d: RadialDensity) -> Tuple[float, float]:
    """(Pf, Vf) on the fixed optimizer grid (cross-checked in the tests
    against the adaptive path)."""
    ws = _Workspace(len(p.coeffs) - 1, p.n, d)
    pf, vf, _, _ = ws.values_and_grads(np.asarray(p.coeffs))
    return pf, vf


def minimize(cfg: MinimizeConfig) -> MinimizeReport:
    """Projected-gradient descent with backtracking and exact volume
    re-projection after every accepted step."""
    rng = np.random.default_rng(cfg.seed)
    d = cfg.density
    if cfg.init is None:
        prof = random_feasible_profile(cfg.n, d, cfg.target_volume,
                                       cfg.modes, cfg.init_amplitude, rng)
    else:
        prof = cfg.init
    ws = _Workspace(len(prof.coeffs) - 1, cfg.n, d)
    a = _project_volume(ws, np.asarray(prof.coeffs, dtype=float),
                        cfg.target_volume)

    pf, vf, grad_p, grad_v = ws.values_and_grads(a)
    history = [pf]
    # fixed diagonal preconditioner against the k^2 stiffness of the
    # perimeter modes; the descent stays first order
    k = np.arange(len(a))
    precond = 1.0 / (1.0 + k * k)
    eta = 0.5
    converged = False
    ls_failed = False
    gnorm = math.inf
    it = 0
    for it in range(1, cfg.max_iters + 1):
        mu = float(grad_p @ grad_v) / float(grad_v @ grad_v)
        g = grad_p - mu * grad_v
        gnorm = float(np.linalg.norm(g))
        if gnorm < cfg.grad_tol:
            converged = True
            break
        step = precond * g
        slope = float(g @ step)
        accepted = False
        for _ in range(30):
            trial = a - eta * step
            try:
                trial = _project_volume(ws, trial, cfg.target_volume)
                pf_t, vf_t, gp_t, gv_t = ws.values_and_grads(trial)
            except DomainError:
                eta *= 0.5
                continue
            # the resolution slack keeps the contraction going once true
            # decreases fall below float resolution of Pf
            if pf_t <= pf - 1e-4 * eta * slope + 2.0 * np.finfo(float).eps * abs(pf):
                a, pf, vf, grad_p, grad_v = trial, pf_t, vf_t, gp_t, gv_t
                accepted = True
                break
            eta *= 0.5
        if not accepted:
            ls_failed = True
            break
        history.append(pf)
        eta = min(eta * 1.8, 20.0)

    final = PolarProfile(tuple(a), cfg.n)
    acc = profile_functionals(final, d)
    tau_ball = ball_radius_for_volume(cfg.n, d, cfg.target_volume)
    pf_ball = ball_quantities(cfg.n, d, tau_ball).Pf
    return MinimizeReport(
        final=final,
        Pf_history=history,
        Vf_drift=abs(acc.Vf - cfg.target_volume) / cfg.target_volume,
        deficit=acc.Pf - pf_ball,
        nonround_energy=final.nonround_energy(),
        converged=converged,
        iterations=it,
        grad_norm=gnorm,
        line_search_failed=ls_failed,
    )
