import math

import numpy as np
import pytest

from isohyp.density import cosh_power, scaled_quadratic
from isohyp.functionals import ball_quantities
from isohyp.geometry import theta_of_fermi
from isohyp.shooting import (EventKind, ShootingConfig, TrajectoryKind,
                             breakdown_at_state, classify, lambda_for_ball,
                             ordered_curl_events, rhs, shoot)
from isohyp.lemma_checks import formula_k_residual_trajectory

D1 = cosh_power(1)


class TestLambdaForBall:
    def test_plane_closed_form(self):
        assert lambda_for_ball(2, D1, 1.0) == pytest.approx(
            1 / math.tanh(1.0) + math.tanh(1.0), abs=1e-15)

    def test_large_radius_limit(self):
        for p in (1, 2, 3):
            assert lambda_for_ball(2, cosh_power(p), 20.0) == \
                pytest.approx(1.0 + p, abs=1e-8)

    def test_matches_ball_mean_curvature(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 7))
            tau = float(rng.uniform(0.2, 2.5))
            d = cosh_power(int(rng.integers(1, 4)))
            assert lambda_for_ball(n, d, tau) == pytest.approx(
                ball_quantities(n, d, tau).Hf, abs=1e-12)


class TestRhs:
    def test_centered_circle_curvature(self):
        # on the circle of radius tau the constraint returns coth(tau)
        n, tau = 3, 1.0
        cfg = ShootingConfig(n=n, density=D1, lam=lambda_for_ball(n, D1, tau),
                             start_t=tau)
        # a point on the circle at polar angle 0.9, with the circle tangent
        s = math.asinh(math.sinh(tau) * math.sin(0.9))
        t = math.atanh(math.tanh(tau) * math.cos(0.9))
        alpha = theta_of_fermi(s, t) - 0.5 * math.pi
        b = breakdown_at_state(cfg, s, t, alpha)
        assert b.kappa_gamma == pytest.approx(1 / math.tanh(tau), abs=1e-11)
        assert b.kappa_c == pytest.approx(1 / math.tanh(tau), abs=1e-11)
        assert b.hf == pytest.approx(cfg.lam, abs=1e-11)

    def test_axis_start_continuity_limit(self):
        n, tau = 4, 1.0
        lam = 1.1 * lambda_for_ball(n, D1, tau)
        cfg = ShootingConfig(n=n, density=D1, lam=lam, start_t=tau)
        b = breakdown_at_state(cfg, 0.0, tau, 0.5 * math.pi)
        expected = (lam - D1.h(tau, 1)) / (n - 1)
        assert b.kappa_gamma == pytest.approx(expected, abs=1e-12)
        assert b.kappa_c == pytest.approx(expected, abs=1e-12)

    def test_plane_has_no_comparison_term(self):
        cfg = ShootingConfig(n=2, density=D1, lam=2.0, start_t=1.0)
        b = breakdown_at_state(cfg, 0.4, 0.3, 1.0)
        assert b.hf == pytest.approx(b.kappa_gamma + b.h1, abs=1e-15)

    def test_velocity_components(self):
        cfg = ShootingConfig(n=3, density=D1, lam=3.0, start_t=1.0)
        s, t, alpha = 0.5, 0.2, 1.1
        ds, dt, dalpha = rhs(cfg, 0.0, (s, t, alpha))
        assert ds == pytest.approx(math.sin(alpha), abs=1e-15)
        assert dt == pytest.approx(-math.cos(alpha) / math.cosh(s), abs=1e-15)
        b = breakdown_at_state(cfg, s, t, alpha)
        assert dalpha == pytest.approx(
            math.tanh(s) * math.cos(alpha) - b.kappa_gamma, abs=1e-12)


class TestBallShooting:
    @pytest.mark.parametrize("n,tau", [(2, 0.5), (3, 1.0), (4, 2.0)])
    def test_centered_circle_closure(self, n, tau):
        lam = lambda_for_ball(n, D1, tau)
        traj = shoot(ShootingConfig(n=n, density=D1, lam=lam, start_t=tau,
                                    step_tol=1e-12))
        cl = classify(traj)
        assert cl.kind is TrajectoryKind.CENTERED_CIRCLE
        assert cl.rho_deviation < 1e-6
        assert cl.closing_angle_defect < 1e-6
        assert traj.closure.t_end == pytest.approx(-tau, abs=1e-6)
        assert cl.monotonicity_violation_u is None

    def test_reflection_symmetry_of_solution(self):
        # the closed solution is symmetric across e2: relative to the e2
        # crossing, s is even and t is odd
        tau = 1.0
        lam = lambda_for_ball(3, D1, tau)
        traj = shoot(ShootingConfig(n=3, density=D1, lam=lam, start_t=tau,
                                    step_tol=1e-12))
        lo, hi = traj.states[0].u, traj.total_arclength
        for _ in range(80):   # bisect t(u) = 0
            mid = 0.5 * (lo + hi)
            if traj.state_at(mid)[1] > 0.0:
                lo = mid
            else:
                hi = mid
        u_mid = 0.5 * (lo + hi)
        span = min(u_mid - traj.states[0].u, traj.total_arclength - u_mid)
        for delta in np.linspace(0.05, 0.95, 15) * span:
            s1, t1, _ = traj.state_at(u_mid - float(delta))
            s2, t2, _ = traj.state_at(u_mid + float(delta))
            assert s2 == pytest.approx(s1, abs=1e-8)
            assert t2 == pytest.approx(-t1, abs=1e-8)

    def test_constraint_conservation_geometric(self):
        lam = lambda_for_ball(3, D1, 1.0)
        traj = shoot(ShootingConfig(n=3, density=D1, lam=lam, start_t=1.0))
        assert traj.hf_drift() < 1e-4

    def test_frame_curvature_identity_along_trajectory(self):
        lam = lambda_for_ball(3, D1, 1.0)
        traj = shoot(ShootingConfig(n=3, density=D1, lam=lam, start_t=1.0,
                                    step_tol=1e-12))
        assert formula_k_residual_trajectory(traj) < 1e-5


class TestPerturbedShooting:
    def test_curl_sequence_order_and_witness(self):
        lam = 1.1 * lambda_for_ball(3, D1, 1.0)
        traj = shoot(ShootingConfig(n=3, density=D1, lam=lam, start_t=1.0))
        cl = classify(traj)
        assert cl.kind is TrajectoryKind.CURL_SEQUENCE
        triple = ordered_curl_events(traj)
        assert triple is not None
        a0, a1, a2 = triple
        assert 0 < a0 < a1 < a2
        assert cl.monotonicity_violation_u is not None
        assert cl.monotonicity_violation_u <= a2 + 1e-9
        # event states match their tangent targets to the localization tol
        for ev in traj.events:
            if ev.kind is EventKind.HITS_XPERP:
                assert abs(ev.state.alpha) < 1e-9
            if ev.kind is EventKind.HITS_MINUS_X:
                assert abs(ev.state.alpha + 0.5 * math.pi) < 1e-9
            if ev.kind is EventKind.HITS_PLUS_X:
                assert abs(ev.state.alpha + 1.5 * math.pi) < 1e-9

    def test_undercurved_escape(self):
        lam = 0.9 * lambda_for_ball(3, D1, 1.0)
        traj = shoot(ShootingConfig(n=3, density=D1, lam=lam, start_t=1.0))
        cl = classify(traj)
        assert cl.kind is TrajectoryKind.ESCAPED
        assert traj.termination == "domain_exit"

    def test_step_limit(self):
        lam = lambda_for_ball(3, D1, 1.0)
        traj = shoot(ShootingConfig(n=3, density=D1, lam=lam, start_t=1.0,
                                    max_arclength=0.5))
        assert classify(traj).kind is TrajectoryKind.STEP_LIMIT

    def test_quadratic_density_ball(self):
        d = scaled_quadratic(0.2)
        lam = lambda_for_ball(3, d, 0.8)
        traj = shoot(ShootingConfig(n=3, density=d, lam=lam, start_t=0.8,
                                    step_tol=1e-12))
        assert classify(traj).kind is TrajectoryKind.CENTERED_CIRCLE


class TestInvariants:
    def test_start_curvature_data(self):
        # kappa_gamma(0) = kappa(C_0) = (lam - h'(tau))/(n-1) > 1 for
        # lam >= lambda_ball, and its derivative vanishes at the start
        for rel in (1.0, 1.05, 1.2):
            n, tau = 3, 1.0
            lam = rel * lambda_for_ball(n, D1, tau)
            cfg = ShootingConfig(n=n, density=D1, lam=lam, start_t=tau)
            traj = shoot(cfg)
            k0 = (lam - D1.h(tau, 1)) / (n - 1)
            b0 = traj.breakdown_at(traj.states[0].u)
            assert b0.kappa_gamma == pytest.approx(k0, abs=1e-8)
            assert b0.kappa_gamma >= b0.kappa_c - 1e-8
            assert b0.kappa_c > 1.0
            k_early = traj.breakdown_at(1e-3).kappa_gamma
            assert abs(k_early - k0) / 1e-3 < 1e-2

    def test_comparison_center_monotone_on_quadrant_ii_segments(self):
        # x1 of the hyperbolic comparison center is non-decreasing while
        # the tangent is in the II quadrant and kappa_gamma >= kappa(C) > 1
        lam = 1.05 * lambda_for_ball(3, D1, 1.0)
        traj = shoot(ShootingConfig(n=3, density=D1, lam=lam, start_t=1.0,
                                    step_tol=1e-12))
        us = np.linspace(traj.states[0].u, traj.total_arclength, 500)
        prev = -math.inf
        for u in us:
            s, t, alpha = traj.state_at(float(u))
            if not (1e-3 < alpha < 0.5 * math.pi - 1e-3) or s < 1e-3:
                prev = -math.inf
                continue
            b = traj.breakdown_at(float(u))
            if not (b.kappa_gamma >= b.kappa_c > 1.0):
                prev = -math.inf
                continue
            x = math.tan(alpha) * math.sinh(s)
            if abs(x) >= 1.0:
                prev = -math.inf
                continue
            t_c = t - math.atanh(x)
            x1 = math.tanh(0.5 * t_c)
            assert x1 >= prev - 1e-8
            prev = x1
