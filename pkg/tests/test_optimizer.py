import math

import numpy as np
import pytest

from isohyp.density import cosh_power
from isohyp.functionals import (PolarProfile, ball_quantities,
                                ball_radius_for_volume, constant_profile,
                                profile_functionals)
from isohyp import optimize as op
from conftest import translated_ball_profile

D1 = cosh_power(1)
TARGET = ball_quantities(3, D1, 1.0).Vf


class TestProfileMeanCurvature:
    def test_constant_profile_is_ball(self):
        tau = 1.1
        for theta in (0.3, 1.0, 2.5):
            b = op.profile_mean_curvature(constant_profile(4, tau), D1, theta)
            assert b.kappa_gamma == pytest.approx(1 / math.tanh(tau), rel=1e-12)
            assert b.kappa_c == pytest.approx(1 / math.tanh(tau), rel=1e-10)
            assert b.h1 == pytest.approx(math.tanh(tau), rel=1e-12)
            assert b.hf == pytest.approx(3 / math.tanh(tau) + math.tanh(tau),
                                         rel=1e-10)

    def test_plane_drops_comparison_term(self):
        p = PolarProfile((1.0, 0.05), 2)
        b = op.profile_mean_curvature(p, D1, 0.9)
        assert b.hf == pytest.approx(b.kappa_gamma + b.h1, abs=1e-14)

    def test_perturbation_scaling(self):
        # Hf variation is first order in a mode-2 perturbation
        def spread(eps):
            p = PolarProfile((1.0, 0.0, eps), 3)
            vals = [op.profile_mean_curvature(p, D1, th).hf
                    for th in np.linspace(0.2, math.pi - 0.2, 40)]
            return max(vals) - min(vals)

        ratio = spread(2e-3) / spread(1e-3)
        assert 1.6 < ratio < 2.4


class TestGradient:
    def test_ball_is_critical(self):
        tau = ball_radius_for_volume(3, D1, TARGET)
        g, _ = op.gradient(constant_profile(3, tau, 16), D1, TARGET)
        assert float(np.linalg.norm(g)) < 1e-8

    def test_projection_orthogonality(self, rng):
        for seed in range(5):
            prof = op.random_feasible_profile(3, D1, TARGET, 10, 0.15,
                                              np.random.default_rng(seed))
            ws = op._Workspace(10, 3, D1)
            _, _, gp, gv = ws.values_and_grads(np.asarray(prof.coeffs))
            g, mu = op.gradient(prof, D1, TARGET)
            assert abs(float(g @ gv)) <= 1e-10 * float(np.linalg.norm(gv)) \
                * max(1.0, float(np.linalg.norm(g)))

    def test_matches_finite_differences(self):
        # analytic gradient vs central differences of the adaptive-path
        # functionals, ten random profiles
        h = 1e-6
        for seed in range(10):
            rng = np.random.default_rng(100 + seed)
            prof = op.random_feasible_profile(3, D1, TARGET, 6, 0.12, rng)
            a = np.asarray(prof.coeffs)
            ws = op._Workspace(6, 3, D1)
            _, _, gp, gv = ws.values_and_grads(a)
            for k in (0, 1, 3, 6):
                up = a.copy()
                up[k] += h
                dn = a.copy()
                dn[k] -= h
                fd_p = (profile_functionals(PolarProfile(tuple(up), 3), D1).Pf
                        - profile_functionals(PolarProfile(tuple(dn), 3), D1).Pf) / (2 * h)
                fd_v = (profile_functionals(PolarProfile(tuple(up), 3), D1).Vf
                        - profile_functionals(PolarProfile(tuple(dn), 3), D1).Vf) / (2 * h)
                assert fd_p == pytest.approx(gp[k], rel=1e-4, abs=1e-6)
                assert fd_v == pytest.approx(gv[k], rel=1e-4, abs=1e-6)


class TestMinimize:
    def test_ball_init_already_optimal(self):
        tau = ball_radius_for_volume(3, D1, TARGET)
        cfg = op.MinimizeConfig(n=3, density=D1, target_volume=TARGET,
                                init=constant_profile(3, tau, 16))
        rep = op.minimize(cfg)
        assert rep.converged
        assert rep.iterations == 1
        assert abs(rep.deficit) < 1e-10

    def test_random_perturbation_converges_to_ball(self):
        cfg = op.MinimizeConfig(n=3, density=D1, target_volume=TARGET,
                                seed=2, init_amplitude=0.2)
        rep = op.minimize(cfg)
        assert rep.converged
        assert rep.nonround_energy < 1e-4
        assert rep.deficit >= -1e-6
        assert rep.Vf_drift <= 1e-8
        # descent up to the line-search tolerance
        h = rep.Pf_history
        assert all(b <= a + 1e-12 for a, b in zip(h, h[1:]))

    def test_translated_ball_init(self):
        prof = translated_ball_profile(3, 1.0, 0.3, modes=16)
        target = profile_functionals(prof, D1).Vf
        cfg = op.MinimizeConfig(n=3, density=D1, target_volume=target,
                                init=prof)
        rep = op.minimize(cfg)
        tau_eq = ball_radius_for_volume(3, D1, target)
        pf_ball = ball_quantities(3, D1, tau_eq).Pf
        assert rep.Pf_history[0] - pf_ball > 1e-3   # strictly suboptimal start
        assert rep.converged
        assert rep.deficit < 1e-8
        h = rep.Pf_history
        assert all(b <= a + 1e-12 for a, b in zip(h, h[1:]))

    def test_mean_curvature_constant_at_convergence(self):
        cfg = op.MinimizeConfig(n=3, density=D1, target_volume=TARGET,
                                seed=9, init_amplitude=0.15)
        rep = op.minimize(cfg)
        vals = [op.profile_mean_curvature(rep.final, D1, th).hf
                for th in np.linspace(0.1, math.pi - 0.1, 60)]
        assert max(vals) - min(vals) < 1e-3


class TestRandomFeasibleProfiles:
    def test_isoperimetric_spot_check(self):
        # random feasible profiles never beat the ball of equal volume
        for seed in range(25):
            rng = np.random.default_rng(seed)
            amp = float(rng.uniform(0.02, 0.25))
            prof = op.random_feasible_profile(3, D1, TARGET, 12, amp, rng)
            r = profile_functionals(prof, D1)
            tau_eq = ball_radius_for_volume(3, D1, r.Vf)
            assert r.Pf >= ball_quantities(3, D1, tau_eq).Pf - 1e-9
