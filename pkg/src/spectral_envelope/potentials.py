"""Potential shapes as signed power sums, and the tangent construction f = g(h).

The transformation g is never built explicitly; everything goes through f
and h with the chain rule:

    g'(h(t))  = f'(t) / h'(t)
    g''(h(t)) = (f''(t) h'(t) - f'(t) h''(t)) / h'(t)**3
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import (ConfigError, DegenerateBase, DomainViolation,
                     IndefiniteConvexity, NonMonotone)

Domain = Literal["half", "line"]

DEFAULT_SAMPLE_DOMAIN = (1e-3, 1e3)
DEFAULT_SAMPLES = 512


@dataclass(frozen=True)
class PotentialShape:
    """f(r) = sum of c * r**q over ``terms``.

    ``domain="half"`` is the radial half-line r > 0; ``domain="line"`` is the
    full line, where only even integer exponents are allowed so the shape is
    an even function of x.
    """

    terms: tuple[tuple[float, float], ...]
    domain: Domain = "half"

    def __post_init__(self):
        terms = tuple((float(c), float(q)) for c, q in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ValueError("a potential needs at least one term")
        if self.domain not in ("half", "line"):
            raise ValueError(f"unknown domain {self.domain!r}")
        for c, q in terms:
            if not q > -2:
                raise ValueError(f"exponent {q:g} not admissible (need q > -2)")
            if self.domain == "line" and (q != int(q) or int(q) % 2 or q < 0):
                raise ValueError(f"full-line shapes need even integer exponents, got {q:g}")

    @property
    def exponents(self) -> tuple[float, ...]:
        return tuple(q for _, q in self.terms)

    @property
    def is_single_power(self) -> bool:
        return len(self.terms) == 1

    def __call__(self, r):
        return evaluate(self, r)

    def __str__(self):
        return ",".join(f"{c:g}:{q:g}" for c, q in self.terms)


def parse_potential(spec: str, domain: Domain = "half") -> PotentialShape:
    """Parse ``"coeff:exponent,coeff:exponent,..."``, e.g. ``"-1:-1,1:2"``."""
    terms = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            c, q = chunk.split(":")
            terms.append((float(c), float(q)))
        except ValueError as exc:
            raise ConfigError(f"bad potential term {chunk!r}; expected coeff:exponent") from exc
    try:
        return PotentialShape(tuple(terms), domain)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _check_domain(shape: PotentialShape, r) -> None:
    if shape.domain == "half":
        if np.any(np.asarray(r) <= 0) and any(q < 0 for q in shape.exponents):
            raise DomainViolation("r must be > 0 for negative exponents")
        if np.any(np.asarray(r) < 0):
            raise DomainViolation("half-line shapes need r >= 0")


def evaluate(shape: PotentialShape, r):
    if isinstance(r, float) and r > 0:
        return math.fsum(c * r ** q for c, q in shape.terms)
    _check_domain(shape, r)
    r = np.asarray(r, dtype=float)
    out = sum(c * r ** q for c, q in shape.terms)
    return float(out) if out.ndim == 0 else out


def derivative(shape: PotentialShape, r, order: int = 1):
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if isinstance(r, float) and r > 0:
        if order == 1:
            return math.fsum(c * q * r ** (q - 1) for c, q in shape.terms if q != 0)
        return math.fsum(c * q * (q - 1) * r ** (q - 2) for c, q in shape.terms if q not in (0, 1))
    _check_domain(shape, r)
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    for c, q in shape.terms:
        if order == 1 and q != 0:
            out = out + c * q * r ** (q - 1)
        elif order == 2 and q not in (0, 1):
            out = out + c * q * (q - 1) * r ** (q - 2)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TangentCoefficients:
    a: float
    b: float
    t: float


def tangent_coefficients(f: PotentialShape, h: PotentialShape, t: float) -> TangentCoefficients:
    """Tangent potential a + b*h(x) touching f at x = t."""
    t = float(t)
    dh = derivative(h, t, 1)
    if dh == 0:
        raise DegenerateBase(f"h'({t:g}) = 0")
    b = derivative(f, t, 1) / dh
    if not b > 0:
        raise NonMonotone(f"g'(h) = {b:g} <= 0 at t = {t:g}")
    return TangentCoefficients(a=evaluate(f, t) - b * evaluate(h, t), b=b, t=t)


class Convexity(enum.Enum):
    CONVEX = "convex"
    CONCAVE = "concave"
    INDEFINITE = "indefinite"
    LINEAR = "linear"  # g'' == 0: f is an affine function of h


def _sample_points(domain: tuple[float, float], n: int) -> np.ndarray:
    lo, hi = domain
    if lo > 0:
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def g_second_derivative(f: PotentialShape, h: PotentialShape, x):
    df, d2f = derivative(f, x, 1), derivative(f, x, 2)
    dh, d2h = derivative(h, x, 1), derivative(h, x, 2)
    return (d2f * dh - df * d2h) / dh ** 3


def classify_convexity(f: PotentialShape, h: PotentialShape,
                       sample_domain: tuple[float, float] = DEFAULT_SAMPLE_DOMAIN,
                       n_samples: int = DEFAULT_SAMPLES) -> Convexity:
    x = _sample_points(sample_domain, n_samples)
    df, d2f = derivative(f, x, 1), derivative(f, x, 2)
    dh, d2h = derivative(h, x, 1), derivative(h, x, 2)
    if np.any(dh == 0):
        raise DegenerateBase("h' vanishes on the sample domain")
    num = d2f * dh - df * d2h
    # Rounding noise when f is an affine image of h; scale by the two products.
    noise = 1e-12 * (np.abs(d2f * dh) + np.abs(df * d2h))
    sign = np.where(np.abs(num) <= noise, 0.0, np.sign(num / dh ** 3))
    if np.all(sign == 0):
        return Convexity.LINEAR
    if np.all(sign > 0):
        return Convexity.CONVEX
    if np.all(sign < 0):
        return Convexity.CONCAVE
    return Convexity.INDEFINITE


def require_definite(f: PotentialShape, h: PotentialShape,
                     sample_domain: tuple[float, float] = DEFAULT_SAMPLE_DOMAIN,
                     n_samples: int = DEFAULT_SAMPLES) -> Convexity:
    """Classify (f, h) and insist on a usable pair: g increasing, definite convexity."""
    conv = classify_convexity(f, h, sample_domain, n_samples)
    if conv is Convexity.INDEFINITE:
        raise IndefiniteConvexity(f"g''(h) changes sign for f={f}, h={h}")
    x = _sample_points(sample_domain, n_samples)
    gprime = derivative(f, x, 1) / derivative(h, x, 1)
    if not np.all(gprime > 0):
        raise NonMonotone(f"g'(h) is not positive throughout for f={f}, h={h}")
    return conv
