"""Scalar profiles with analytic first and second derivatives.

Warp factors and cone profiles enter the metric together with their first
two derivatives, so we carry all three channels explicitly instead of
differentiating numerically.  Implementations must keep the three channels
mutually consistent; tests compare them against centered differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class Smooth1D:
    """A scalar function of one variable with analytic f' and f''."""

    #: open interval on which the profile is defined
    domain: tuple[float, float] = (-math.inf, math.inf)

    def value(self, r: float) -> float:
        raise NotImplementedError

    def deriv(self, r: float) -> float:
        raise NotImplementedError

    def deriv2(self, r: float) -> float:
        raise NotImplementedError

    def __call__(self, r: float) -> float:
        return self.value(r)

    def eval_all(self, r: float) -> tuple[float, float, float]:
        """(f, f', f'') at r in one call."""
        return self.value(r), self.deriv(r), self.deriv2(r)


@dataclass(frozen=True)
class SinhProfile(Smooth1D):
    """sinh(r), the cone profile of the unsmoothed constant-curvature chart."""

    def value(self, r: float) -> float:
        return math.sinh(r)

    def deriv(self, r: float) -> float:
        return math.cosh(r)

    def deriv2(self, r: float) -> float:
        return math.sinh(r)


@dataclass(frozen=True)
class CoshWarp(Smooth1D):
    """cosh(rate * t); the warp of a constant-curvature normal fibration.

    rate = b produces the curvature -b*b space when the base has
    curvature -b*b as well.
    """

    rate: float = 1.0

    def __post_init__(self):
        if not (self.rate > 0.0 and math.isfinite(self.rate)):
            raise ValueError(f"warp rate must be positive and finite, got {self.rate}")

    def value(self, t: float) -> float:
        return math.cosh(self.rate * t)

    def deriv(self, t: float) -> float:
        return self.rate * math.sinh(self.rate * t)

    def deriv2(self, t: float) -> float:
        return self.rate * self.rate * math.cosh(self.rate * t)


@dataclass(frozen=True)
class ConstantProfile(Smooth1D):
    """Constant function, mainly a test double (warp 1 gives a metric product)."""

    c: float = 1.0

    def value(self, r: float) -> float:
        return self.c

    def deriv(self, r: float) -> float:
        return 0.0

    def deriv2(self, r: float) -> float:
        return 0.0


def quintic_step(u: float) -> float:
    """C2 step: 0 at u<=0, 1 at u>=1, zero first and second derivatives there."""
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u))


def quintic_step_d1(u: float) -> float:
    if u <= 0.0 or u >= 1.0:
        return 0.0
    return 30.0 * u * u * (1.0 - u) * (1.0 - u)


def quintic_step_d2(u: float) -> float:
    if u <= 0.0 or u >= 1.0:
        return 0.0
    return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u)


@dataclass(frozen=True)
class GTProfile(Smooth1D):
    """Smoothed cone profile k^s(u) * sinh(r).

    Below r0 this is sinh(r); above rho it is k * sinh(r); in between the
    exponent follows the quintic C2 step in u = (r - r0)/(rho - r0), so the
    profile is C2 across both junctions and the two outer branches are hit
    exactly.  k = 1 collapses to sinh everywhere.
    """

    k: float
    r0: float
    rho: float

    def __post_init__(self):
        if self.k < 1.0:
            raise ValueError(f"profile multiplier k must be >= 1, got {self.k}")
        if not (0.0 < self.r0 < self.rho):
            raise ValueError(
                f"need 0 < r0 < rho, got r0={self.r0}, rho={self.rho}"
            )

    def _u(self, r: float) -> float:
        return (r - self.r0) / (self.rho - self.r0)

    def value(self, r: float) -> float:
        a = math.log(self.k)
        if a == 0.0 or r <= self.r0:
            return math.sinh(r)
        if r >= self.rho:
            return self.k * math.sinh(r)
        return math.exp(a * quintic_step(self._u(r))) * math.sinh(r)

    def deriv(self, r: float) -> float:
        a = math.log(self.k)
        if a == 0.0 or r <= self.r0:
            return math.cosh(r)
        if r >= self.rho:
            return self.k * math.cosh(r)
        du = 1.0 / (self.rho - self.r0)
        u = self._u(r)
        e = math.exp(a * quintic_step(u))
        return e * (a * quintic_step_d1(u) * du * math.sinh(r) + math.cosh(r))

    def deriv2(self, r: float) -> float:
        a = math.log(self.k)
        if a == 0.0 or r <= self.r0:
            return math.sinh(r)
        if r >= self.rho:
            return self.k * math.sinh(r)
        du = 1.0 / (self.rho - self.r0)
        u = self._u(r)
        s1 = quintic_step_d1(u) * du
        s2 = quintic_step_d2(u) * du * du
        e = math.exp(a * quintic_step(u))
        sh, ch = math.sinh(r), math.cosh(r)
        return e * ((a * s2 + a * a * s1 * s1) * sh + 2.0 * a * s1 * ch + sh)


def check_derivative_consistency(fn: Smooth1D, points, h: float = 1e-6,
                                 rtol: float = 1e-6) -> float:
    """Worst relative mismatch between analytic and centered-difference derivatives.

    Returns the largest relative error seen; raises nothing.  Used by tests
    and by model constructors that accept user-supplied profiles.
    """
    worst = 0.0
    for r in points:
        fp = (fn.value(r + h) - fn.value(r - h)) / (2.0 * h)
        fpp = (fn.value(r + h) - 2.0 * fn.value(r) + fn.value(r - h)) / (h * h)
        for got, ref in ((fn.deriv(r), fp), (fn.deriv2(r), fpp)):
            scale = max(abs(got), abs(ref), 1.0)
            worst = max(worst, abs(got - ref) / scale)
    return worst
