"""Radial log-convex density families with analytic derivatives.

A density is f = exp(h(dist(o, .))) for a smooth even h.  Three families:

* ``CoshPower(p)``:      h(s) = p * ln cosh(s), integer p >= 0
* ``EvenPolynomial``:    h(s) = c2 s^2 + c4 s^4 + ...
* ``ScaledQuadratic(c)``: h(s) = c * s^2

``h(0)`` is deliberately not normalized to 0; all functional comparisons
in this package are ratios or same-density differences, so the additive
constant never matters.

Exponent 0 / coefficient 0 members are constructible (they serve as the
unweighted reference) but are rejected by :func:`validate_strict`, which
is the gate used by every consumer that needs strict log-convexity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

from .geometry import DiskPoint, dist_to_origin


@dataclass(frozen=True)
class RadialDensity:
    """Log-density h and its first three derivatives, evaluated analytically."""

    family: str            # "cosh" | "poly" | "quad"
    params: Tuple[float, ...]

    def __post_init__(self):
        if self.family not in ("cosh", "poly", "quad"):
            raise ValueError(f"unknown density family {self.family!r}")
        object.__setattr__(self, "params", tuple(float(x) for x in self.params))
        if self.family == "cosh":
            p = self.params[0]
            if len(self.params) != 1 or p != int(p) or p < 0:
                raise ValueError("cosh family takes one integer exponent >= 0")
        if self.family == "quad":
            if len(self.params) != 1 or self.params[0] < 0:
                raise ValueError("quad family takes one coefficient c >= 0")
        if self.family == "poly" and len(self.params) == 0:
            raise ValueError("poly family needs at least the s^2 coefficient")

    # -- evaluation ----------------------------------------------------

    def h(self, s: float, order: int = 0) -> float:
        """Value of h or of its derivative of the given order (0..3) at s."""
        if order not in (0, 1, 2, 3):
            raise ValueError("order must be in 0..3")
        if self.family == "cosh":
            p = self.params[0]
            if order == 0:
                return p * _log_cosh(s)
            if order == 1:
                return p * math.tanh(s)
            sech2 = 1.0 / math.cosh(s) ** 2
            if order == 2:
                return p * sech2
            return -2.0 * p * sech2 * math.tanh(s)
        if self.family == "quad":
            c = self.params[0]
            return (c * s * s, 2.0 * c * s, 2.0 * c, 0.0)[order]
        # even polynomial: params are the coefficients of s^2, s^4, ...
        total = 0.0
        for j, c in enumerate(self.params):
            k = 2 * (j + 1)
            if order == 0:
                total += c * s ** k
            elif k - order >= 0:
                fac = 1.0
                for i in range(order):
                    fac *= k - i
                total += c * fac * s ** (k - order)
        return total

    def weight(self, rho: float) -> float:
        """f at distance rho from the base point: exp(h(rho))."""
        return math.exp(self.h(rho))

    def label(self) -> str:
        if self.family == "cosh":
            return f"cosh:{int(self.params[0])}"
        if self.family == "quad":
            return f"quad:{self.params[0]:g}"
        return "poly:" + ",".join(f"{c:g}" for c in self.params)


def _log_cosh(s: float) -> float:
    # overflow-safe ln cosh
    a = abs(s)
    return a + math.log1p(math.exp(-2.0 * a)) - math.log(2.0)


def cosh_power(p: int) -> RadialDensity:
    return RadialDensity("cosh", (p,))


def scaled_quadratic(c: float) -> RadialDensity:
    return RadialDensity("quad", (c,))


def even_polynomial(coeffs: Sequence[float]) -> RadialDensity:
    return RadialDensity("poly", tuple(coeffs))


def derivatives(d: RadialDensity, s: float, order: int) -> float:
    return d.h(s, order)


def weight_at(d: RadialDensity, p: DiskPoint) -> float:
    """f(p) = exp(h(dist(o, p))); raises DomainError outside the disk."""
    return d.weight(dist_to_origin(p))


@dataclass(frozen=True)
class StrictnessReport:
    passed: bool
    worst_margin: float
    worst_s: float


def validate_strict(d: RadialDensity, s_max: float = 10.0,
                    step: float = 1e-3) -> StrictnessReport:
    """Sampled check of strict convexity: h''(s) > 0 on [0, s_max].

    Sampling is enough here because all experiments live in bounded
    radius; a failed report is a value, not an error.
    """
    n = int(round(s_max / step))
    worst = math.inf
    worst_s = 0.0
    for i in range(n + 1):
        s = i * step
        v = d.h(s, 2)
        if v < worst:
            worst = v
            worst_s = s
    return StrictnessReport(worst > 0.0, worst, worst_s)


def parse_density(spec) -> RadialDensity:
    """Parse a density from the CLI mini-syntax or a config record.

    Accepts "cosh:1", "quad:0.1", "poly:0.1,0.01" or a mapping
    {"family": name, "params": [..]} with family in
    {cosh, quad, poly} (long aliases CoshPower, ScaledQuadratic,
    EvenPolynomial also accepted).
    """
    if isinstance(spec, RadialDensity):
        return spec
    if isinstance(spec, dict):
        family = str(spec["family"])
        params = spec.get("params", [])
        alias = {"coshpower": "cosh", "scaledquadratic": "quad",
                 "evenpolynomial": "poly"}
        family = alias.get(family.lower(), family.lower())
        if isinstance(params, (int, float)):
            params = [params]
        return RadialDensity(family, tuple(params))
    text = str(spec)
    if ":" not in text:
        raise ValueError(f"density spec {text!r} must look like 'cosh:1'")
    family, _, rest = text.partition(":")
    params = tuple(float(x) for x in rest.split(",") if x != "")
    if family == "cosh":
        params = (int(params[0]),)
    return RadialDensity(family, params)
