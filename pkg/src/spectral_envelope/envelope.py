"""Envelope energy bounds from the spectral data of a power-law base.

Two routes to the same number:

* tangent: optimize v a(t) + H_n(v b(t)) over the contact point t
  (max for convex g, min for concave g);
* kinetic: min over s of s + v g(hbar_n(s)).
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

from .base_spectra import PowerLawSpectrum, QuantumNumbers
from .errors import ConfigError, EnvelopeError
from .kinetic import S_RANGE, g_of, semiclassical_energy_full
from .numerics import DEFAULT_TOL, Tolerance, minimize_log_scan
from .potentials import Convexity, PotentialShape, require_definite, tangent_coefficients

T_RANGE = (1e-6, 1e6)


class Side(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"
    EXACT = "exact"


class Method(enum.Enum):
    TANGENT = "tangent"
    KINETIC = "kinetic"
    SEMICLASSICAL = "semiclassical"
    LOCAL_ENERGY = "local"


@dataclass(frozen=True)
class BoundResult:
    value: float
    side: Side
    method: Method
    optimizer: float
    iterations: int
    converged: bool
    error: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "side": self.side.value,
            "method": self.method.value,
            "optimizer": self.optimizer,
            "iterations": self.iterations,
            "converged": self.converged,
            "error": self.error,
        }


def side_for(conv: Convexity) -> Side:
    return {Convexity.CONVEX: Side.LOWER, Convexity.CONCAVE: Side.UPPER,
            Convexity.LINEAR: Side.EXACT}[conv]


def check_base(h: PotentialShape, base: PowerLawSpectrum, qn: Optional[QuantumNumbers]) -> None:
    if not h.is_single_power or h.terms[0][1] != base.q:
        raise ConfigError(f"base spectrum (q={base.q:g}) does not describe h = {h}")
    if abs(abs(h.terms[0][0]) - base.scale) > 1e-12 * base.scale:
        raise ConfigError(f"base spectrum scale {base.scale:g} does not match h = {h}")
    if qn is not None and qn != base.qn:
        raise ConfigError(f"quantum numbers {qn} do not match the base spectrum {base.qn}")


def envelope_bound_tangent(f: PotentialShape, h: PotentialShape, base: PowerLawSpectrum, v: float,
                           qn: Optional[QuantumNumbers] = None, tol: Tolerance = DEFAULT_TOL) -> BoundResult:
    check_base(h, base, qn)
    conv = require_definite(f, h)
    sign = -1.0 if conv is Convexity.CONVEX else 1.0

    def tangent_energy(t):
        tc = tangent_coefficients(f, h, t)
        return v * tc.a + base.energy(v * tc.b)

    if conv is Convexity.LINEAR:
        # Every tangent is f itself: any contact point gives the exact level.
        return BoundResult(tangent_energy(1.0), Side.EXACT, Method.TANGENT, 1.0, 0, True)
    res = minimize_log_scan(lambda t: sign * tangent_energy(t), *T_RANGE, tol=tol)
    return BoundResult(sign * res.fun, side_for(conv), Method.TANGENT, res.x, res.nit, True)


def envelope_bound_kinetic(f: PotentialShape, h: PotentialShape, base: PowerLawSpectrum, v: float,
                           qn: Optional[QuantumNumbers] = None, tol: Tolerance = DEFAULT_TOL) -> BoundResult:
    check_base(h, base, qn)
    conv = require_definite(f, h)
    res = minimize_log_scan(lambda s: s + v * g_of(f, h, base.kinetic(s)), *S_RANGE, tol=tol)
    return BoundResult(res.fun, side_for(conv), Method.KINETIC, res.x, res.nit, True)


def semiclassical_bound(f: PotentialShape, h: PotentialShape, base: PowerLawSpectrum, v: float,
                        qn: Optional[QuantumNumbers] = None, tol: Tolerance = DEFAULT_TOL) -> BoundResult:
    """min_r [(P/r)^2 + v f(r)]: the kinetic route after the change of variables r = P/sqrt(s)."""
    check_base(h, base, qn)
    conv = require_definite(f, h)
    res = semiclassical_energy_full(base.P, f, v, tol)
    return BoundResult(res.fun, side_for(conv), Method.SEMICLASSICAL, res.x, res.nit, True)


def failed(method: Method, exc: Exception, side: Side = Side.EXACT) -> BoundResult:
    return BoundResult(math.nan, side, method, math.nan, 0, False, error=f"{type(exc).__name__}: {exc}")


def bound_sweep(f: PotentialShape, h: PotentialShape, base: PowerLawSpectrum, qn: Optional[QuantumNumbers],
                v_grid: Iterable[float], method: Method = Method.KINETIC, workers: int = 1,
                tol: Tolerance = DEFAULT_TOL) -> list[BoundResult]:
    """Bounds at each coupling; a failing point is recorded, not raised. Output follows grid order."""
    compute = bound_function(method)
    try:
        side = side_for(require_definite(f, h))
    except EnvelopeError:
        side = Side.EXACT

    def one(v):
        try:
            if not v > 0:
                raise ConfigError(f"coupling {v:g} must be positive")
            return compute(f, h, base, v, qn, tol=tol)
        except EnvelopeError as exc:
            return failed(method, exc, side)

    grid = list(v_grid)
    if workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, grid))
    return [one(v) for v in grid]


def bound_function(method: Method):
    if method is Method.LOCAL_ENERGY:
        from .local_energy import local_energy_bound  # local_energy builds on this module
        return local_energy_bound
    return {
        Method.TANGENT: envelope_bound_tangent,
        Method.KINETIC: envelope_bound_kinetic,
        Method.SEMICLASSICAL: semiclassical_bound,
    }[method]
