import math

import numpy as np
import pytest

from isohyp.density import (RadialDensity, cosh_power, even_polynomial,
                            parse_density, scaled_quadratic, validate_strict,
                            weight_at)
from isohyp.geometry import DiskPoint, DomainError

LN3 = math.log(3.0)

FAMILIES = [cosh_power(1), cosh_power(3), scaled_quadratic(0.25),
            even_polynomial((0.1, 0.02)), even_polynomial((0.3, 0.0, 0.001))]


class TestDerivatives:
    def test_even_function_has_flat_slope_at_zero(self):
        for d in FAMILIES:
            assert d.h(0.0, 1) == 0.0

    def test_cosh_slope_closed_form(self):
        assert cosh_power(1).h(LN3, 1) == pytest.approx(0.8, abs=1e-15)

    def test_quadratic_second_derivative(self):
        assert scaled_quadratic(0.1).h(2.0, 2) == pytest.approx(0.2, abs=1e-15)

    def test_bad_order_rejected(self):
        with pytest.raises(ValueError):
            cosh_power(1).h(1.0, 4)

    def test_finite_difference_agreement(self):
        h_step = 1e-5
        for d in FAMILIES:
            for s in np.linspace(0.1, 5.0, 25):
                s = float(s)
                for order in (1, 2, 3):
                    fd = (d.h(s + h_step, order - 1)
                          - d.h(s - h_step, order - 1)) / (2 * h_step)
                    scale = max(1.0, abs(d.h(s, order)))
                    assert abs(fd - d.h(s, order)) / scale < 1e-6


class TestWeight:
    def test_origin(self):
        for d in FAMILIES:
            assert weight_at(d, DiskPoint(0.0, 0.0)) == \
                pytest.approx(math.exp(d.h(0.0)), rel=1e-15)

    def test_cosh_closed_forms(self):
        p = DiskPoint(0.5, 0.0)
        assert weight_at(cosh_power(1), p) == pytest.approx(5 / 3, rel=1e-14)
        assert weight_at(cosh_power(3), p) == pytest.approx((5 / 3) ** 3, rel=1e-14)

    def test_outside_disk(self):
        with pytest.raises(DomainError):
            weight_at(cosh_power(1), DiskPoint(0.8, 0.8))

    def test_rotation_invariance(self, rng):
        for _ in range(100):
            r = float(rng.uniform(0.0, 0.9))
            a = float(rng.uniform(0, 2 * math.pi))
            b = float(rng.uniform(0, 2 * math.pi))
            d = FAMILIES[int(rng.integers(len(FAMILIES)))]
            w1 = weight_at(d, DiskPoint(r * math.cos(a), r * math.sin(a)))
            w2 = weight_at(d, DiskPoint(r * math.cos(b), r * math.sin(b)))
            assert w1 == pytest.approx(w2, rel=1e-12)


class TestStrictness:
    def test_cosh_passes_with_sech_margin(self):
        rep = validate_strict(cosh_power(1))
        assert rep.passed
        assert rep.worst_margin == pytest.approx(1 / math.cosh(10.0) ** 2,
                                                 rel=1e-9)
        assert rep.worst_s == pytest.approx(10.0, abs=1e-9)

    def test_flat_quadratic_fails(self):
        assert not validate_strict(scaled_quadratic(0.0)).passed

    def test_cosh_zero_reference_fails(self):
        assert not validate_strict(cosh_power(0)).passed

    def test_concave_polynomial_fails(self):
        rep = validate_strict(even_polynomial((-0.1,)))
        assert not rep.passed
        assert rep.worst_margin < 0


class TestParse:
    def test_mini_syntax(self):
        assert parse_density("cosh:3") == cosh_power(3)
        assert parse_density("quad:0.1") == scaled_quadratic(0.1)
        assert parse_density("poly:0.1,0.02") == even_polynomial((0.1, 0.02))

    def test_record_form(self):
        assert parse_density({"family": "cosh", "params": [2]}) == cosh_power(2)
        assert parse_density({"family": "CoshPower", "params": 2}) == cosh_power(2)
        assert parse_density({"family": "ScaledQuadratic", "params": [0.3]}) == \
            scaled_quadratic(0.3)

    def test_labels_roundtrip(self):
        for d in FAMILIES:
            assert parse_density(d.label()) == d

    def test_invalid(self):
        with pytest.raises(ValueError):
            parse_density("bogus:1")
        with pytest.raises(ValueError):
            parse_density("cosh")
        with pytest.raises(ValueError):
            RadialDensity("cosh", (1.5,))
