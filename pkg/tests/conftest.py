import math

import numpy as np
import pytest
from scipy.optimize import brentq

from isohyp.functionals import PolarProfile


def translated_ball_profile(n: int, tau: float, c: float,
                            modes: int = 40) -> PolarProfile:
    """Polar profile of the ball of radius tau centered at distance c along
    the positive axis, fitted to cosine modes.

    The boundary satisfies the hyperbolic law of cosines
    cosh(tau) = cosh(rho) cosh(c) - sinh(rho) sinh(c) cos(theta); the fit
    is machine exact because the coefficients decay geometrically.
    """
    if c >= tau:
        raise ValueError("the ball must contain the origin for a polar profile")

    def rho_of(theta: float) -> float:
        def gap(r: float) -> float:
            return (math.cosh(r) * math.cosh(c)
                    - math.sinh(r) * math.sinh(c) * math.cos(theta)
                    - math.cosh(tau))
        return brentq(gap, 1e-12, tau + c + 1.0, xtol=1e-15)

    thetas = np.linspace(0.0, math.pi, 8 * modes + 1)
    values = np.array([rho_of(float(t)) for t in thetas])
    design = np.cos(np.outer(thetas, np.arange(modes + 1)))
    coeffs, *_ = np.linalg.lstsq(design, values, rcond=None)
    return PolarProfile(tuple(coeffs), n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def disk_points(rng, count: int, r_max: float = 0.95):
    r = np.sqrt(rng.uniform(0.0, r_max * r_max, count))
    phi = rng.uniform(0.0, 2.0 * math.pi, count)
    return np.stack([r * np.cos(phi), r * np.sin(phi)], axis=1)
