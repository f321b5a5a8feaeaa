"""Cross-module consistency suites run by ``spectral-envelope verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .base_spectra import QuantumNumbers, spectrum_for_shape
from .envelope import envelope_bound_kinetic, envelope_bound_tangent
from .errors import ConfigError
from .kinetic import (legendre_to_energy, legendre_to_kinetic, power_curve,
                      power_kinetic_potential)
from .local_energy import coincidence_check
from .numerics import finite_diff
from .oracle import solve
from .potentials import PotentialShape


@dataclass(frozen=True)
class Check:
    name: str
    observed: float
    expected: float
    tolerance: float
    passed: bool

    def __str__(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: observed={self.observed:.12g} expected={self.expected:.12g} tol={self.tolerance:g}"


def _close(name, observed, expected, tol, relative=False) -> Check:
    err = abs(observed - expected)
    if relative:
        err /= abs(expected)
    return Check(name, observed, expected, tol, bool(err < tol))


QUARTIC = PotentialShape(((1.0, 4.0),), "line")
OSC_LINE = PotentialShape(((1.0, 2.0),), "line")
COMBO = PotentialShape(((-1.0, -1.0), (1.0, 2.0)))
COULOMB = PotentialShape(((-1.0, -1.0),))
OSC_RADIAL = PotentialShape(((1.0, 2.0),))
K7 = dict(d=3, l=2)


def coincidence_suite() -> list[Check]:
    checks = []
    cases = [("quartic/oscillator", QUARTIC, OSC_LINE, "line"),
             ("combo/coulomb", COMBO, COULOMB, "radial"),
             ("combo/oscillator", COMBO, OSC_RADIAL, "radial")]
    for label, f, h, mode in cases:
        for v in (0.5, 1.0, 2.0, 4.0):
            for n in (0, 1):
                qn = QuantumNumbers.line(n) if mode == "line" else QuantumNumbers(n=n, **K7)
                env, loc, delta = coincidence_check(f, h, spectrum_for_shape(h, qn), v)
                checks.append(Check(f"coincidence {label} v={v:g} n={n}", delta, 0.0, 1e-8, delta < 1e-8))
    return checks


def roundtrip_suite() -> list[Check]:
    checks = []
    curves = {
        "oscillator n=0": (power_curve(1.0, 2.0), power_kinetic_potential(2.0, 0.5)),
        "oscillator n=2": (power_curve(5.0, 2.0), power_kinetic_potential(2.0, 2.5)),
        "hydrogen P=1": (power_curve(-0.25, -1.0), power_kinetic_potential(-1.0, 1.0)),
    }
    for label, (F, fbar) in curves.items():
        for v in (0.5, 1.0, 2.0, 10.0):
            s, _ = legendre_to_kinetic(F, v)
            v2, F2 = legendre_to_energy(fbar, s)
            checks.append(_close(f"round trip {label} v={v:g} (coupling)", v2, v, 1e-8))
            checks.append(_close(f"round trip {label} v={v:g} (energy)", F2, F(v), 1e-8))
            d2F = finite_diff(F, v, 2, 1e-3 * v, points=5)
            d2f = finite_diff(fbar, s, 2, 1e-3 * s, points=5)
            checks.append(_close(f"curvature product {label} v={v:g}", d2F * d2f, -1.0 / v ** 3, 1e-4, relative=True))
    return checks


def sandwich_suite(points: int = 10) -> list[Check]:
    checks = []
    qn = QuantumNumbers(n=0, **K7)
    lower_base = spectrum_for_shape(COULOMB, qn)
    upper_base = spectrum_for_shape(OSC_RADIAL, qn)
    for v in np.geomspace(0.25, 4.0, points):
        lo = envelope_bound_kinetic(COMBO, COULOMB, lower_base, v).value
        hi = envelope_bound_kinetic(COMBO, OSC_RADIAL, upper_base, v).value
        E = solve(COMBO, v, qn).E
        ok = lo < E < hi
        checks.append(Check(f"sandwich v={v:.4g} [{lo:.6f}, {hi:.6f}]", E, 0.5 * (lo + hi), 0.5 * (hi - lo), ok))
    return checks


def scaling_suite() -> list[Check]:
    checks = []
    base0 = spectrum_for_shape(OSC_LINE, QuantumNumbers.line(0))
    ref = envelope_bound_tangent(QUARTIC, OSC_LINE, base0, 1.0).value
    for v in (0.5, 2.0, 8.0):
        val = envelope_bound_tangent(QUARTIC, OSC_LINE, base0, v).value
        checks.append(_close(f"quartic bound scaling v={v:g}", val, v ** (1 / 3) * ref, 1e-8))
    for q, mode in ((2.0, "line"), (4.0, "line"), (-1.0, "radial"), (2.0, "radial")):
        qn = QuantumNumbers.line(0) if mode == "line" else QuantumNumbers(n=0, d=3, l=0)
        f = PotentialShape(((math.copysign(1.0, q), q),), "line" if mode == "line" else "half")
        E1 = solve(f, 1.0, qn).E
        for v in (0.5, 4.0):
            Ev = solve(f, v, qn).E
            checks.append(_close(f"oracle scaling q={q:g} {mode} v={v:g}", Ev / E1, v ** (2 / (2 + q)), 1e-5, relative=True))
    return checks


def invariance_suite() -> list[Check]:
    ref = solve(COMBO, 1.0, QuantumNumbers(n=0, d=3, l=2)).E
    checks = []
    for d, l in ((5, 1), (7, 0)):
        E = solve(COMBO, 1.0, QuantumNumbers(n=0, d=d, l=l)).E
        checks.append(_close(f"(d,l)=({d},{l}) vs (3,2)", E, ref, 2e-6))
    return checks


SUITES: dict[str, Callable[[], list[Check]]] = {
    "coincidence": coincidence_suite,
    "roundtrip": roundtrip_suite,
    "sandwich": sandwich_suite,
    "scaling": scaling_suite,
    "invariance": invariance_suite,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [c for suite in SUITES.values() for c in suite()]
    try:
        return SUITES[name]()
    except KeyError:
        raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all") from None
