"""Solvable power-law base problems -Delta + u * sgn(q) r**q.

Closed forms exist for the oscillator (q = 2) on the line and in radial
mode, and for the Coulomb potential (q = -1) in radial mode. Any other
exponent gets its unit-coupling eigenvalue from the shooting oracle, once,
and caches it.

Radial bookkeeping uses k = 2l + d. The radial equation only sees k through
(k - 1)(k - 3), and with u(0) = 0 imposed the k = 1 problem is the same as
k = 3; closed forms use that effective k.
"""
from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import ConfigError, UnsupportedExponent
from .numerics import hermite, laguerre
from .potentials import PotentialShape

Mode = Literal["line", "radial"]


@dataclass(frozen=True)
class QuantumNumbers:
    n: int = 0
    d: int = 3
    l: int = 0
    mode: Mode = "radial"

    def __post_init__(self):
        if self.n < 0 or self.l < 0 or self.d < 1:
            raise ValueError(f"invalid quantum numbers {self}")
        if self.mode not in ("line", "radial"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def k(self) -> int:
        return 2 * self.l + self.d

    @property
    def k_eff(self) -> int:
        return 3 if self.k == 1 else self.k

    @property
    def m(self) -> float:
        """Small-r exponent of the regular radial solution, u ~ r**m."""
        return (self.k_eff - 1) / 2

    @classmethod
    def line(cls, n: int) -> "QuantumNumbers":
        return cls(n=n, d=1, l=0, mode="line")


def p_from_energy(q: float, E1: float) -> float:
    return (abs(E1) / (1 + q / 2)) ** ((2 + q) / (2 * q)) * math.sqrt(abs(q) / 2)


def energy_from_p(q: float, P: float) -> float:
    """Inverse of the P relation; the sign of the energy is sgn(q)."""
    mag = (1 + q / 2) * (P / math.sqrt(abs(q) / 2)) ** (2 * q / (2 + q))
    return math.copysign(mag, q)


def _check_exponent(q: float) -> None:
    if q == 0 or not q > -2:
        raise UnsupportedExponent(f"power-law base needs q != 0 and q > -2, got {q:g}")


def _closed_form_p(q: float, qn: QuantumNumbers) -> float | None:
    if qn.mode == "line":
        return qn.n + 0.5 if q == 2 else None
    if q == 2:
        return 2 * qn.n + qn.k_eff / 2
    if q == -1:
        return qn.n + (qn.k_eff - 1) / 2
    return None


def p_number(q: float, qn: QuantumNumbers, E1: float | None = None) -> float:
    _check_exponent(q)
    P = _closed_form_p(q, qn)
    if P is not None:
        return P
    if E1 is None:
        raise ValueError(f"no closed form for q={q:g} in {qn.mode} mode; supply E1")
    return p_from_energy(q, E1)


_E1_CACHE: dict[tuple, float] = {}
_E1_LOCK = threading.Lock()


def unit_eigenvalue(q: float, qn: QuantumNumbers) -> float:
    """E^(q)_n at unit coupling: closed form if known, otherwise oracle (cached)."""
    _check_exponent(q)
    P = _closed_form_p(q, qn)
    if P is not None:
        return energy_from_p(q, P)
    key = (q, qn.mode, qn.n, qn.k_eff if qn.mode == "radial" else 0)
    cached = _E1_CACHE.get(key)
    if cached is not None:
        return cached
    from . import oracle  # deferred: the oracle is the expensive, independent path

    if qn.mode == "line":
        shape = PotentialShape(((math.copysign(1.0, q), q),), "line")
        E1 = oracle.solve_line(shape, 1.0, qn.n).E
    else:
        shape = PotentialShape(((math.copysign(1.0, q), q),), "half")
        E1 = oracle.solve_radial(oracle.RadialProblem(shape, 1.0, qn)).E
    with _E1_LOCK:
        _E1_CACHE.setdefault(key, E1)
    return _E1_CACHE[key]


@dataclass(frozen=True)
class PowerLawSpectrum:
    """Eigendata of -Delta + u * scale * sgn(q) r**q.

    ``scale`` lets a base such as h = 3 r**2 reuse the unit-shape data:
    H(u) = E1 * (scale * u) ** (2 / (2 + q)).
    """

    q: float
    qn: QuantumNumbers
    E1: float
    P: float
    scale: float = 1.0

    def __post_init__(self):
        _check_exponent(self.q)
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    @property
    def exponent(self) -> float:
        return 2 / (2 + self.q)

    def energy(self, u: float) -> float:
        return eigenvalue_curve(self, u)

    def energy_derivative(self, u: float) -> float:
        return self.E1 * self.exponent * self.scale ** self.exponent * u ** (self.exponent - 1)

    def kinetic(self, s: float) -> float:
        """Kinetic potential of the base shape h."""
        return self.scale * math.copysign(1.0, self.q) * (self.P / math.sqrt(s)) ** self.q

    @property
    def unit_shape(self) -> PotentialShape:
        domain = "line" if self.qn.mode == "line" else "half"
        return PotentialShape(((math.copysign(1.0, self.q), self.q),), domain)


def power_law_spectrum(q: float, qn: QuantumNumbers, scale: float = 1.0) -> PowerLawSpectrum:
    E1 = unit_eigenvalue(q, qn)
    return PowerLawSpectrum(q=q, qn=qn, E1=E1, P=p_number(q, qn, E1), scale=scale)


def spectrum_for_shape(h: PotentialShape, qn: QuantumNumbers) -> PowerLawSpectrum:
    """Base spectrum for a single-term shape h = c r**q with sgn(c) = sgn(q)."""
    if not h.is_single_power:
        raise ConfigError(f"base potential must be a single power term, got {h}")
    (c, q), = h.terms
    _check_exponent(q)
    if math.copysign(1.0, c) != math.copysign(1.0, q):
        raise ConfigError(f"base term {c:g}*r^{q:g} is not attractive: sign of coeff must match sign of exponent")
    if (h.domain == "line") != (qn.mode == "line"):
        raise ConfigError("base potential domain does not match the quantum-number mode")
    return power_law_spectrum(q, qn, scale=abs(c))


def eigenvalue_curve(spec: PowerLawSpectrum, u: float) -> float:
    return spec.E1 * (spec.scale * u) ** spec.exponent


class Family(enum.Enum):
    OSCILLATOR_1D = "oscillator1d"
    RADIAL_COULOMB = "radial_coulomb"
    RADIAL_OSCILLATOR = "radial_oscillator"


@dataclass(frozen=True)
class TrialFunction:
    family: Family
    qn: QuantumNumbers
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("trial parameter t must be positive")
        if (self.family is Family.OSCILLATOR_1D) != (self.qn.mode == "line"):
            raise ValueError(f"{self.family} does not match mode {self.qn.mode!r}")

    def __call__(self, r):
        return trial_eval(self, r)


def family_for(q: float, mode: Mode) -> Family | None:
    if mode == "line":
        return Family.OSCILLATOR_1D if q == 2 else None
    if q == 2:
        return Family.RADIAL_OSCILLATOR
    if q == -1:
        return Family.RADIAL_COULOMB
    return None


def family_exponent(family: Family) -> float:
    return -1.0 if family is Family.RADIAL_COULOMB else 2.0


def trial_eval(tf: TrialFunction, r):
    t, n = tf.t, tf.qn.n
    r = np.asarray(r, dtype=float)
    if tf.family is Family.OSCILLATOR_1D:
        out = hermite(n, t ** 0.25 * r) * np.exp(-0.5 * math.sqrt(t) * r * r)
    elif tf.family is Family.RADIAL_COULOMB:
        m = tf.qn.m
        out = r ** m * np.exp(-0.5 * t * r) * laguerre(n, 2 * m - 1, t * r)
    else:
        m = tf.qn.m
        out = r ** m * np.exp(-0.5 * t * r * r) * laguerre(n, m - 0.5, t * r * r)
    return float(out) if np.ndim(out) == 0 else out


def trial_eigendata(tf: TrialFunction) -> tuple[float, float]:
    """(u, H) such that (-Delta + u h0) phi = H phi, h0 the unit base shape."""
    t, n = tf.t, tf.qn.n
    if tf.family is Family.OSCILLATOR_1D:
        return t, math.sqrt(t) * (2 * n + 1)
    P = _closed_form_p(family_exponent(tf.family), tf.qn)
    if tf.family is Family.RADIAL_COULOMB:
        return P * t, -t * t / 4
    return t * t, 2 * P * t


def trial_parameter(family: Family, qn: QuantumNumbers, u: float) -> float:
    """Inverse of the t -> u map in ``trial_eigendata``."""
    if not u > 0:
        raise ValueError("coupling must be positive")
    if family is Family.OSCILLATOR_1D:
        return u
    if family is Family.RADIAL_COULOMB:
        return u / _closed_form_p(-1.0, qn)
    return math.sqrt(u)


def trial_length(tf: TrialFunction) -> float:
    """Natural length scale of a trial function."""
    if tf.family is Family.RADIAL_COULOMB:
        return 1.0 / tf.t
    return tf.t ** -0.5 if tf.family is Family.RADIAL_OSCILLATOR else tf.t ** -0.25


def trial_residual(tf: TrialFunction, num: int = 400, step: float = 1e-3) -> float:
    """max |(-Delta + u h0) phi - H phi| / (max |phi| / L**2) on a grid.

    L is the trial's length scale, so the residual is dimensionless and the
    same for every t. The Laplacian uses 5-point differences; in radial mode
    -Delta is -d2/dr2 + m(m-1)/r**2 on the reduced function and the stencil
    runs in log r, where r**m is smooth.
    """
    u, H = trial_eigendata(tf)
    L = trial_length(tf)
    reach = (4.0 + 2.0 * tf.qn.n) * (4.0 if tf.family is Family.RADIAL_COULOMB else 1.0)
    if tf.qn.mode == "line":
        x = np.linspace(-reach * L, reach * L, num)
        base = x * x
        centrifugal = 0.0
    else:
        x = np.linspace(0.05 * L, reach * L, num)
        base = -1.0 / x if tf.family is Family.RADIAL_COULOMB else x * x
        m = tf.qn.m
        centrifugal = m * (m - 1) / (x * x)
    phi = trial_eval(tf, x)
    if tf.qn.mode == "line":
        h = step * L
        d2 = (-trial_eval(tf, x + 2 * h) + 16 * trial_eval(tf, x + h) - 30 * phi
              + 16 * trial_eval(tf, x - h) - trial_eval(tf, x - 2 * h)) / (12 * h * h)
    else:
        # phi'' = (phi_yy - phi_y) / r**2 with y = log r
        dy = np.minimum(step * L / x, 0.005)
        p2, p1 = trial_eval(tf, x * np.exp(2 * dy)), trial_eval(tf, x * np.exp(dy))
        m1, m2 = trial_eval(tf, x * np.exp(-dy)), trial_eval(tf, x * np.exp(-2 * dy))
        d_y = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * dy)
        d_yy = (-p2 + 16 * p1 - 30 * phi + 16 * m1 - m2) / (12 * dy * dy)
        d2 = (d_yy - d_y) / (x * x)
    res = -d2 + (centrifugal + u * base - H) * phi
    return float(np.max(np.abs(res)) * L * L / np.max(np.abs(phi)))
