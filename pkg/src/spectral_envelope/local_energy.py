"""Local-energy bounds with envelope-generated trial functions.

A trial function phi that is an eigenfunction of -Delta + u h0 with
eigenvalue H has local energy

    (H_f phi)(r) / phi(r) = H - u h0(r) + v f(r)

wherever phi != 0, and the right-hand side is smooth through the zeros of
phi. Bounds use this identity form; the direct ratio with a finite-difference
Laplacian is kept as an independent cross-check.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Literal, Optional

from .base_spectra import (Family, PowerLawSpectrum, QuantumNumbers, TrialFunction, family_exponent,
                           family_for, trial_eigendata, trial_eval, trial_parameter, trial_residual)
from .envelope import (T_RANGE, BoundResult, Method, Side, check_base, envelope_bound_tangent,
                       side_for)
from .errors import ConfigError, NoBracketFound, NoRoot, NoSignChange, TrialZero, UnboundedInner
from .numerics import (DEFAULT_TOL, MinimizeResult, Tolerance, bisect_root, finite_diff,
                       minimize_log_scan, minimize_positive)
from .potentials import Convexity, PotentialShape, derivative, evaluate, require_definite

Form = Literal["identity", "numeric"]

RESIDUAL_GATE = 1e-6


def _unit_base(family: Family, qn: QuantumNumbers) -> PotentialShape:
    q = family_exponent(family)
    return PotentialShape(((math.copysign(1.0, q), q),), "line" if qn.mode == "line" else "half")


@dataclass(frozen=True)
class LocalEnergyProfile:
    trial: TrialFunction
    target_f: PotentialShape
    v: float
    form: Form = "identity"


def local_energy(profile: LocalEnergyProfile, r: float) -> float:
    tf, f, v = profile.trial, profile.target_f, profile.v
    if profile.form == "identity":
        u, H = trial_eigendata(tf)
        return H - u * evaluate(_unit_base(tf.family, tf.qn), r) + v * evaluate(f, r)

    phi = trial_eval(tf, r)
    if phi == 0:
        raise TrialZero(f"trial function vanishes at r={r:g}")
    step = min(1e-3, abs(r) / 4) if tf.qn.mode == "radial" else 1e-3
    d2 = finite_diff(lambda x: trial_eval(tf, x), r, order=2, step=step, points=5)
    centrifugal = 0.0
    if tf.qn.mode == "radial":
        m = tf.qn.m
        centrifugal = m * (m - 1) / (r * r)
    return -d2 / phi + centrifugal + v * evaluate(f, r)


def inner_extremum(profile: LocalEnergyProfile, kind: Literal["inf", "sup"],
                   tol: Tolerance = DEFAULT_TOL) -> MinimizeResult:
    """inf or sup over r > 0 of the local energy; returns (r*, value, iterations)."""
    sign = 1.0 if kind == "inf" else -1.0
    try:
        res = minimize_positive(lambda r: sign * local_energy(profile, r), 1.0, tol)
    except NoBracketFound as exc:
        raise UnboundedInner(f"{kind} of the local energy diverges for t={profile.trial.t:g}") from exc
    return MinimizeResult(res.x, sign * res.fun, res.nit)


@functools.lru_cache(maxsize=None)
def _residual_ok(family: Family, qn: QuantumNumbers) -> bool:
    # the residual is scale-free, so one t stands for all
    return trial_residual(TrialFunction(family, qn, 1.0)) < RESIDUAL_GATE


def _family(h: PotentialShape, base: PowerLawSpectrum) -> Family:
    family = family_for(base.q, base.qn.mode)
    if family is None:
        raise ConfigError(f"no closed-form trial family for q={base.q:g} in {base.qn.mode} mode")
    if not _residual_ok(family, base.qn):
        raise ConfigError(f"{family.value} trial with {base.qn} fails the eigenfunction residual gate")
    return family


def local_energy_bound(f: PotentialShape, h: PotentialShape, base: PowerLawSpectrum, v: float,
                       qn: Optional[QuantumNumbers] = None, tol: Tolerance = DEFAULT_TOL) -> BoundResult:
    """max_t inf_r (convex g, lower bound) or min_t sup_r (concave g, upper bound)."""
    check_base(h, base, qn)
    conv = require_definite(f, h)
    family = _family(h, base)
    qn = base.qn

    def profile(t):
        return LocalEnergyProfile(TrialFunction(family, qn, t), f, v)

    if conv is Convexity.LINEAR:
        # Local energy is constant in r once u matches the tangent slope.
        h0 = _unit_base(family, qn)
        u = v * derivative(f, 1.0, 1) / derivative(h0, 1.0, 1)
        t = trial_parameter(family, qn, u)
        return BoundResult(local_energy(profile(t), 1.0), Side.EXACT, Method.LOCAL_ENERGY, t, 0, True)

    kind = "inf" if conv is Convexity.CONVEX else "sup"
    outer_sign = -1.0 if kind == "inf" else 1.0  # maximize the inf, minimize the sup
    inner_tol = tol

    def outer(t):
        try:
            return outer_sign * inner_extremum(profile(t), kind, inner_tol).fun
        except UnboundedInner:
            return math.inf

    res = minimize_log_scan(outer, *T_RANGE, tol=tol.scaled(10))
    return BoundResult(outer_sign * res.fun, side_for(conv), Method.LOCAL_ENERGY, res.x, res.nit, True)


def critical_parameter(f: PotentialShape, h: PotentialShape, qn: QuantumNumbers, r: float,
                       v: float = 1.0, method: Literal["closed", "numeric"] = "closed") -> float:
    """Trial parameter t for which r is a critical point of the local energy in r.

    d/dr [H - u h0 + v f] = 0  gives  u(t) = v f'(r) / h0'(r); ``closed``
    inverts u(t) directly, ``numeric`` bisects the r-derivative in log t.
    """
    if not h.is_single_power:
        raise ConfigError("critical_parameter needs a single-power base h")
    q = h.terms[0][1]
    family = family_for(q, qn.mode)
    if family is None:
        raise ConfigError(f"no trial family for q={q:g} in {qn.mode} mode")
    h0 = _unit_base(family, qn)
    dh0, df = derivative(h0, r, 1), derivative(f, r, 1)
    if method == "closed":
        u = v * df / dh0
        if not u > 0:
            raise NoRoot(f"no positive coupling makes r={r:g} critical")
        return trial_parameter(family, qn, u)

    def slope(y):
        u, _ = trial_eigendata(TrialFunction(family, qn, math.exp(y)))
        return -u * dh0 + v * df

    try:
        y = bisect_root(slope, -40.0, 40.0, Tolerance(abs_x=1e-14, abs_f=1e-300, max_iter=400))
    except NoSignChange as exc:
        raise NoRoot(f"d/dr of the local energy has no zero in t at r={r:g}") from exc
    return math.exp(y)


def coincidence_check(f: PotentialShape, h: PotentialShape, base: PowerLawSpectrum, v: float,
                      qn: Optional[QuantumNumbers] = None,
                      tol: Tolerance = DEFAULT_TOL) -> tuple[BoundResult, BoundResult, float]:
    env = envelope_bound_tangent(f, h, base, v, qn, tol)
    loc = local_energy_bound(f, h, base, v, qn, tol)
    return env, loc, abs(env.value - loc.value)
