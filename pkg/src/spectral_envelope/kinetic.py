"""Kinetic potentials and the Legendre relations that link them to energy curves.

For an energy curve F(v) (concave) the kinetic potential fbar(s) (convex) is
reached through

    s = F(v) - v F'(v),      fbar(s) = F'(v)
    1/v = -fbar'(s),         F(v)/v = fbar(s) - s fbar'(s)

and the energy is recovered as F(v) = min_s [s + v fbar(s)].
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import IndefiniteConvexity, NonAttractive
from .numerics import (DEFAULT_TOL, Tolerance, illinois_root, minimize_log_scan,
                       richardson_derivative)
from .potentials import Convexity, PotentialShape, classify_convexity, evaluate

ScalarFn = Callable[[float], float]

S_RANGE = (1e-6, 1e6)
REL_STEP = 1e-4


@dataclass(frozen=True)
class EnergyCurve:
    """F_n(v); without an analytic derivative, F' uses a Richardson central
    difference with step ``rel_step * v`` (raise it for noisy numerical curves)."""

    value: ScalarFn
    derivative: Optional[ScalarFn] = None
    rel_step: float = REL_STEP

    def __call__(self, v: float) -> float:
        return self.value(v)

    def slope(self, v: float) -> float:
        if self.derivative is not None:
            return self.derivative(v)
        return richardson_derivative(self.value, v, self.rel_step * v)


@dataclass(frozen=True)
class KineticPotential:
    value: ScalarFn
    derivative: Optional[ScalarFn] = None

    def __call__(self, s: float) -> float:
        return self.value(s)

    def slope(self, s: float) -> float:
        if self.derivative is not None:
            return self.derivative(s)
        return richardson_derivative(self.value, s, REL_STEP * s)


def power_curve(E1: float, q: float) -> EnergyCurve:
    """F(v) = E1 v^(2/(2+q)) with its analytic derivative."""
    p = 2 / (2 + q)
    return EnergyCurve(lambda v: E1 * v ** p, lambda v: E1 * p * v ** (p - 1))


def power_kinetic(q: float, P: float, s: float) -> float:
    return math.copysign(1.0, q) * (P / math.sqrt(s)) ** q


def power_kinetic_potential(q: float, P: float) -> KineticPotential:
    sign = math.copysign(1.0, q)
    return KineticPotential(
        lambda s: sign * (P / math.sqrt(s)) ** q,
        lambda s: -0.5 * q * sign * (P / math.sqrt(s)) ** q / s,
    )


def legendre_to_kinetic(F: EnergyCurve, v: float) -> tuple[float, float]:
    if not v > 0:
        raise ValueError("coupling must be positive")
    dF = F.slope(v)
    return F(v) - v * dF, dF


def legendre_to_energy(fbar: KineticPotential, s: float) -> tuple[float, float]:
    if not s > 0:
        raise ValueError("kinetic energy s must be positive")
    df = fbar.slope(s)
    if not df < 0:
        raise NonAttractive(f"fbar'({s:g}) = {df:g} >= 0")
    v = -1.0 / df
    return v, v * (fbar(s) - s * df)


def energy_from_kinetic(fbar: ScalarFn, v: float, tol: Tolerance = DEFAULT_TOL,
                        s_range: tuple[float, float] = S_RANGE) -> float:
    return energy_from_kinetic_full(fbar, v, tol, s_range).fun


def energy_from_kinetic_full(fbar: ScalarFn, v: float, tol: Tolerance = DEFAULT_TOL,
                             s_range: tuple[float, float] = S_RANGE):
    if not v > 0:
        raise ValueError("coupling must be positive")
    return minimize_log_scan(lambda s: s + v * fbar(s), *s_range, tol=tol)


def semiclassical_energy(P: float, f: PotentialShape, v: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """min over r > 0 of (P/r)^2 + v f(r)."""
    return semiclassical_energy_full(P, f, v, tol).fun


def semiclassical_energy_full(P: float, f: PotentialShape, v: float, tol: Tolerance = DEFAULT_TOL):
    if not P > 0:
        raise ValueError("P must be positive")
    return minimize_log_scan(lambda r: (P / r) ** 2 + v * evaluate(f, r), 1e-6, 1e6, tol=tol)


def invert_power(h: PotentialShape, y: float) -> float:
    """r > 0 with h(r) = y for a single-term shape h = c r**q."""
    (c, q), = h.terms
    ratio = y / c
    if not ratio > 0:
        raise ValueError(f"{y:g} is outside the range of h = {h}")
    return ratio ** (1.0 / q)


def g_of(f: PotentialShape, h: PotentialShape, y: float) -> float:
    """g(y) = f(h^{-1}(y)) for a monotone single-power h."""
    return evaluate(f, invert_power(h, y))


def transform_kinetic(f: PotentialShape, h: PotentialShape, hbar: ScalarFn, s: float) -> float:
    """Envelope estimate g(hbar(s)) of the kinetic potential of f.

    This is a lower estimate of fbar(s) when g is convex and an upper one
    when g is concave.
    """
    if not h.is_single_power:
        raise ValueError("transform_kinetic needs a single-power base h")
    if classify_convexity(f, h) is Convexity.INDEFINITE:
        raise IndefiniteConvexity(f"g''(h) changes sign for f={f}, h={h}")
    return g_of(f, h, hbar(s))


def curve_kinetic_potential(F: EnergyCurve, v_lo: float, v_hi: float) -> KineticPotential:
    """Kinetic potential of a sampled/numerical curve by inverting s(v) on [v_lo, v_hi].

    s(v) = F - v F' is increasing for concave F, so a bracketed root search is enough.
    """
    tol = Tolerance(abs_x=1e-13 * v_hi, abs_f=1e-15)

    @functools.lru_cache(maxsize=256)
    def v_of_s(s):
        return illinois_root(lambda v: F(v) - v * F.slope(v) - s, v_lo, v_hi, tol)

    return KineticPotential(lambda s: F.slope(v_of_s(s)), lambda s: -1.0 / v_of_s(s))
