import math

import numpy as np
import pytest

from isohyp.density import cosh_power
from isohyp.geometry import (DiskPoint, FermiCoords, dist_to_origin, fermi_of,
                             frame_at, point_of, theta_of_fermi)
from isohyp import lemma_checks as lc

D1 = cosh_power(1)


class TestH1Circle:
    def test_centered_equality_case(self):
        cfg = lc.H1CircleConfig(y=0.0, tau_e=0.5, o_tilde=0.0, density=D1)
        rep = lc.verify_h1_circle(cfg)
        assert rep.pass_equality is True
        assert rep.pass_signs

    def test_offset_pole_strict_decay(self):
        cfg = lc.H1CircleConfig(y=0.0, tau_e=0.5, o_tilde=0.3, density=D1)
        rep = lc.verify_h1_circle(cfg)
        assert rep.pass_signs
        # strictly negative derivative away from the axis endpoint
        assert rep.min_margin > 0.0
        assert rep.second_deriv_at_0 < -1e-6

    def test_lifted_center_top_sign(self):
        cfg = lc.H1CircleConfig(y=0.4, tau_e=0.2, o_tilde=0.2,
                                density=cosh_power(2))
        rep = lc.verify_h1_circle(cfg)
        assert rep.pass_signs
        assert rep.deriv_at_top < -1e-9

    def test_circle_outside_disk_rejected(self):
        with pytest.raises(Exception):
            lc.H1CircleConfig(y=0.5, tau_e=0.6, o_tilde=0.0, density=D1)

    def test_suite(self):
        rep = lc.run_h1_suite(60, seed=11)
        assert rep.passes == rep.count == 60


class TestFormulaK:
    def test_leaf_residual_zero(self):
        assert lc.formula_k_residual_leaf(0.5) < 1e-10

    def test_geodesic_residual_zero(self):
        assert lc.formula_k_residual_geodesic(0.6) < 1e-8
        assert lc.formula_k_residual_geodesic(0.0) < 1e-8

    def test_circle_residual(self):
        assert lc.formula_k_residual_circle(complex(0.1, 0.2), 0.3) < 1e-6
        assert lc.formula_k_residual_circle(complex(-0.2, 0.1), 0.25, -1) < 1e-6

    def test_suite(self):
        rep = lc.run_formula_k_suite(60, seed=5)
        assert rep.passes == rep.count == 60


class TestCenterC:
    def test_thousand_draws(self):
        rep = lc.verify_center_c(1000, seed=42)
        assert rep.pass_fraction == 1.0
        assert rep.worst_x1 >= -1e-10
        assert rep.worst_trig_mismatch < 1e-10

    def test_concentric_tangent_center_is_foot(self):
        # tangent = Xperp at a point with x1 > 0: the hyperbolic center is
        # the foot of the perpendicular
        from isohyp.geometry import (comparison_circle,
                                     unit_tangent_from_angle)
        p = point_of(FermiCoords(0.6, 0.5))
        c = comparison_circle(p, unit_tangent_from_angle(p, 0.0))
        assert c.hyperbolic_center_on_axis() == pytest.approx(
            math.tanh(0.25), abs=1e-12)


class TestComparisons:
    def _pair(self, seed, **kw):
        rng = np.random.default_rng(seed)
        for _ in range(500):
            pair = lc.build_arc_pair(rng, **kw)
            if pair is not None:
                return pair
        raise RuntimeError("no valid configuration found")

    def test_identical_curves_equality(self):
        pair = self._pair(1, strict=False, identical=True)
        rk = lc.verify_kappa_comparison(pair)
        rc = lc.verify_circle_comparison(pair)
        rn = lc.verify_normal_comparison(pair)
        assert rk.passed and abs(rk.worst_margin) < 1e-12
        assert rc.passed and abs(rc.worst_margin) < 1e-12
        assert rn.passed and rn.worst_margin == 0.0

    def test_strict_curvature_gap_orders_angles(self):
        # two arcs with kappa1 = kappa2 + 0.5 at every shared leaf give a
        # strictly ordered bottom angle
        rng = np.random.default_rng(7)
        pair = None
        while pair is None:
            base = lc.build_arc_pair(rng, strict=False, identical=True)
            if base is None:
                continue
            arc2 = base.arc2
            arc1 = lc.CircleArc(base.p_top, base.alpha_top, arc2.kappa + 0.5)
            s_bot = max(arc1.height(arc1.backward_cut()),
                        arc2.height(arc2.backward_cut())) + 0.02
            s_top = fermi_of(base.p_top).s
            if s_bot > s_top - 0.05:
                continue
            heights = np.linspace(s_bot, s_top - 1e-9, 18)
            pair = lc.ArcPair(arc1, arc2, heights, base.p_top, base.alpha_top)
        rep = lc.verify_kappa_comparison(pair)
        assert rep.passed
        s1 = pair.sampled(1)
        s2 = pair.sampled(2)
        assert s1[0][2] - s2[0][2] > 1e-4
        assert rep.identity_residual < 5e-6

    def test_circle_comparison_identity(self):
        assert lc.kappa_c_identity_draws(500, seed=3) < 1e-9

    def test_mode_dispatcher(self):
        pair = self._pair(2, strict=False, identical=True)
        for mode in ("kappa", "circle", "normal"):
            assert lc.verify_comparison(pair, mode).passed
        with pytest.raises(ValueError):
            lc.verify_comparison(pair, "nope")

    def test_suite(self):
        rep = lc.run_comparison_suite(40, seed=13)
        assert rep.passes == rep.count == 40


class TestFoliationIdentities:
    def _leaf_points(self, l, x1):
        # the leaf through (0, l): Euclidean circle centered (0, c)
        c = (l * l - 1.0) / (2.0 * l)
        radius = (1.0 + l * l) / (2.0 * l)
        y = c + math.sqrt(radius * radius - x1 * x1)
        return DiskPoint(x1, y)

    def test_reflection_identity(self):
        # theta(-s) = pi - theta(s) for leaf-symmetric point pairs
        for l in (0.2, 0.5, 0.7):
            for x1 in (0.1, 0.3, 0.6):
                p1 = self._leaf_points(l, x1)
                p2 = self._leaf_points(l, -x1)
                th1 = frame_at(p1).theta
                th2 = frame_at(p2).theta
                assert th1 + th2 == pytest.approx(math.pi, abs=1e-10)

    def test_theta_monotone_along_leaf(self):
        # moving leftward along a leaf (the Xperp direction) theta decreases
        for l in (0.3, 0.6):
            xs = np.linspace(0.8, -0.8, 60)
            thetas = [frame_at(self._leaf_points(l, float(x))).theta
                      for x in xs]
            assert all(b < a for a, b in zip(thetas, thetas[1:]))

    def test_radial_distance_law(self, rng):
        # tanh(d(0, p)) = tanh(s) / cos(angle between N and X)
        for _ in range(200):
            s = float(rng.uniform(0.05, 1.4))
            t = float(rng.uniform(-1.2, 1.2))
            p = point_of(FermiCoords(s, t))
            rho = dist_to_origin(p)
            cos_beta = math.sin(theta_of_fermi(s, t))
            assert math.tanh(rho) == pytest.approx(
                math.tanh(s) / cos_beta, abs=1e-10)
