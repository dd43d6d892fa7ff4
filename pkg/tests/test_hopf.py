import math

import pytest

from isohyp.density import cosh_power
from isohyp.functionals import ball_quantities, sphere_area
from isohyp.hopf import (SpaceParams, ball_direct, crosscheck, hopf_density,
                         hopf_density_is_strict)

SPACES = [SpaceParams("C", 2), SpaceParams("C", 3), SpaceParams("H", 2),
          SpaceParams("O", 2)]


class TestSpaceParams:
    def test_dimensions(self):
        assert SpaceParams("C", 3).n == 6
        assert SpaceParams("H", 2).n == 8
        assert SpaceParams("O", 2).n == 16

    def test_octonionic_restriction(self):
        with pytest.raises(ValueError):
            SpaceParams("O", 3)

    def test_unknown_field(self):
        with pytest.raises(ValueError):
            SpaceParams("Q", 2)


class TestHopfDensity:
    def test_exponents(self):
        assert hopf_density(SpaceParams("C", 2)) == cosh_power(1)
        assert hopf_density(SpaceParams("H", 2)) == cosh_power(3)
        assert hopf_density(SpaceParams("O", 2)) == cosh_power(7)

    def test_real_field_non_strict(self):
        assert hopf_density(SpaceParams("R", 5)) == cosh_power(0)
        assert not hopf_density_is_strict(SpaceParams("R", 5))

    def test_strict_log_convexity(self):
        for sp in SPACES:
            assert hopf_density_is_strict(sp)
            d = hopf_density(sp)
            for s in (0.0, 0.5, 2.0, 5.0):
                assert d.h(s, 2) == pytest.approx(
                    (sp.d - 1) / math.cosh(s) ** 2, rel=1e-14)
                assert d.h(s, 2) > 0


class TestBallDirect:
    def test_complex_plane_closed_form(self):
        # (C, 2): omega_3 = 2 pi^2, P = 2 pi^2 sinh^3 cosh
        for tau in (0.5, 1.0, 2.0):
            p, v = ball_direct(SpaceParams("C", 2), tau)
            assert p == pytest.approx(
                2 * math.pi ** 2 * math.sinh(tau) ** 3 * math.cosh(tau),
                rel=1e-13)
            assert v == pytest.approx(
                math.pi ** 2 * math.sinh(tau) ** 4 / 2, rel=1e-12)

    def test_euclidean_small_radius_limit(self):
        for sp in SPACES:
            tau = 1e-3
            p, _ = ball_direct(sp, tau)
            assert p / (sphere_area(sp.n) * tau ** (sp.n - 1)) == \
                pytest.approx(1.0, abs=1e-4)

    def test_real_reference_reduces_to_unweighted(self):
        sp = SpaceParams("R", 4)
        p, v = ball_direct(sp, 1.2)
        b = ball_quantities(4, cosh_power(0), 1.2)
        assert p == pytest.approx(b.Pf, rel=1e-13)
        assert v == pytest.approx(b.Vf, rel=1e-12)

    def test_coarea(self):
        h = 1e-5
        for sp in SPACES[:2]:
            _, v_hi = ball_direct(sp, 1.0 + h)
            _, v_lo = ball_direct(sp, 1.0 - h)
            p, _ = ball_direct(sp, 1.0)
            assert (v_hi - v_lo) / (2 * h) == pytest.approx(p, rel=1e-6)


class TestCrosscheck:
    @pytest.mark.parametrize("sp", SPACES, ids=lambda s: f"{s.field}{s.m}")
    @pytest.mark.parametrize("tau", [0.5, 1.0, 2.0])
    def test_discrepancies(self, sp, tau):
        rel_p, rel_v = crosscheck(sp, tau)
        assert rel_p < 1e-10
        assert rel_v < 1e-10


def test_jacobi_factorization_identity():
    # sinh(t) cosh(t) = sinh(2t)/2, the (-4)-direction Jacobi factor
    for t in (0.1, 0.7, 2.3):
        assert math.sinh(t) * math.cosh(t) == \
            pytest.approx(0.5 * math.sinh(2 * t), rel=1e-14)
