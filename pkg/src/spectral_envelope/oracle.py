"""Shooting-method eigenvalue oracle.

Numerov integration outward from the origin on a uniform grid, with the
energy bisected on the node count: for E just below the n-th level the
solution has n interior sign changes, just above it has n + 1. The bracket
therefore closes on the eigenvalue of the problem truncated (Dirichlet) at
r_max, and r_max is pushed out until the wave function has decayed through
a wide enough classically forbidden region that the truncation is invisible.

This path shares nothing with the envelope machinery beyond PotentialShape
evaluation and the bisection helper.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from numba import njit

from .base_spectra import QuantumNumbers
from .errors import NoBoundState, NoSignChange, TruncationTooSmall
from .kinetic import EnergyCurve
from .numerics import Tolerance, bisect_predicate
from .potentials import PotentialShape, evaluate

log = logging.getLogger(__name__)

ORACLE_TOL = Tolerance(abs_x=1e-12, abs_f=1e-14, max_iter=400)
CURVE_TOL = Tolerance(abs_x=1e-15, abs_f=1e-15, max_iter=400)
# Energies carry ~1e-12 rounding noise from the sweep; a 1e-2 relative step
# balances that against the O(h^4) Richardson truncation.
CURVE_REL_STEP = 1e-2
DEFAULT_GRID = 20000
MAX_STEP = 0.01
DECAY_MARGIN = 18.0  # required integral of sqrt(V - E) beyond the turning point
MAX_DOUBLINGS = 12


@njit(cache=True)
def _sweep(V, E, h2, i0, ua, ub):
    """Numerov from grid index i0 (values ua, ub at i0, i0+1) to the end.

    Returns (sign changes strictly inside the grid, u at the last point).
    """
    N = V.shape[0]
    nodes = 0
    last = 0.0
    for val in (ua, ub):
        if val != 0.0:
            if last != 0.0 and (val > 0.0) != (last > 0.0):
                nodes += 1
            last = val
    u_prev, u_cur = ua, ub
    w_prev = (1.0 - h2 * (V[i0] - E) / 12.0) * u_prev
    w_cur = (1.0 - h2 * (V[i0 + 1] - E) / 12.0) * u_cur
    for i in range(i0 + 1, N - 1):
        w_next = 2.0 * w_cur - w_prev + h2 * (V[i] - E) * u_cur
        u_next = w_next / (1.0 - h2 * (V[i + 1] - E) / 12.0)
        if i + 1 < N - 1 and u_next != 0.0:
            if last != 0.0 and (u_next > 0.0) != (last > 0.0):
                nodes += 1
            last = u_next
        if abs(u_next) > 1e150:
            u_next *= 1e-150
            w_next *= 1e-150
            w_cur *= 1e-150
            u_cur *= 1e-150
        w_prev, w_cur = w_cur, w_next
        u_cur = u_next
    return nodes, u_cur


@njit(cache=True)
def _profile(V, E, h2, i0, ua, ub):
    N = V.shape[0]
    u = np.zeros(N)
    u[i0] = ua
    u[i0 + 1] = ub
    w_prev = (1.0 - h2 * (V[i0] - E) / 12.0) * ua
    w_cur = (1.0 - h2 * (V[i0 + 1] - E) / 12.0) * ub
    for i in range(i0 + 1, N - 1):
        w_next = 2.0 * w_cur - w_prev + h2 * (V[i] - E) * u[i]
        u[i + 1] = w_next / (1.0 - h2 * (V[i + 1] - E) / 12.0)
        if abs(u[i + 1]) > 1e150:
            # only a diverging tail gets here; the rest carries no information
            u[i + 1:] = np.inf
            break
        w_prev, w_cur = w_cur, w_next
    return u


@dataclass(frozen=True)
class RadialProblem:
    f: PotentialShape
    v: float
    qn: QuantumNumbers
    r_max: Optional[float] = None
    grid_n: int = DEFAULT_GRID

    def __post_init__(self):
        if not self.v > 0:
            raise ValueError("coupling must be positive")
        if self.qn.mode != "radial":
            raise ValueError("RadialProblem needs radial quantum numbers")


@dataclass(frozen=True)
class OracleResult:
    """``residual`` is the smallest tail amplitude beyond the outer turning
    point relative to the peak amplitude; ``bracket_width`` is the final
    energy bisection interval."""

    E: float
    nodes_found: int
    residual: float
    bracket_width: float
    r_max: float = math.nan
    grid_n: int = 0


@dataclass
class _Setup:
    """One discretized shooting problem at fixed truncation."""

    x: np.ndarray
    V: np.ndarray
    i0: int
    start: callable  # E -> (ua, ub)
    target: int  # sign changes on the sampled half

    @property
    def h2(self):
        return (self.x[1] - self.x[0]) ** 2

    def nodes(self, E):
        ua, ub = self.start(E)
        return _sweep(self.V, E, self.h2, self.i0, ua, ub)[0]

    def profile(self, E):
        ua, ub = self.start(E)
        return _profile(self.V, E, self.h2, self.i0, ua, ub)

    def decay_margin(self, E) -> float:
        excess = self.V[self.i0:] - E
        below = np.nonzero(excess < 0)[0]
        if below.size == 0:
            return math.inf
        tail = np.sqrt(np.clip(excess[below[-1]:], 0.0, None))
        return float(np.sum(tail) * (self.x[1] - self.x[0]))


def _large_r_behaviour(f: PotentialShape, v: float) -> tuple[bool, float]:
    """(confining, ceiling): ceiling is lim v f(r) for non-confining shapes."""
    qmax = max(f.exponents)
    lead = sum(c for c, q in f.terms if q == qmax)
    if qmax > 0:
        if lead <= 0:
            raise NoBoundState(f"{f} is unbounded below at large r")
        return True, math.inf
    return False, v * sum(c for c, q in f.terms if q == 0)


def _length_scale(f: PotentialShape, v: float) -> float:
    qmax = max(f.exponents)
    lead = abs(sum(c for c, q in f.terms if q == qmax)) or 1.0
    if qmax == 0:
        qmax = min(f.exponents)
        lead = abs(sum(c for c, q in f.terms if q == qmax)) or 1.0
    return (v * lead) ** (-1.0 / (qmax + 2))


def _radial_setup(problem: RadialProblem, r_max: float, grid_n: int) -> _Setup:
    qn, f, v = problem.qn, problem.f, problem.v
    r = np.linspace(0.0, r_max, grid_n + 1)
    m = qn.m
    centrifugal = m * (m - 1)  # (k-1)(k-3)/4 with k -> k_eff
    V = np.empty_like(r)
    V[0] = 0.0  # never used: integration starts at index 1
    V[1:] = centrifugal / r[1:] ** 2 + v * evaluate(f, r[1:])
    # First-order series correction from a Coulomb term: u ~ r^m (1 + a1 r).
    a1 = v * sum(c for c, q in f.terms if q == -1) / (2 * m)
    r1, r2 = r[1], r[2]

    def start(E):
        return r1 ** m * (1 + a1 * r1), r2 ** m * (1 + a1 * r2)

    return _Setup(r, V, 1, start, qn.n)


def _line_setup(f: PotentialShape, v: float, n: int, x_max: float, grid_n: int) -> _Setup:
    x = np.linspace(0.0, x_max, grid_n + 1)
    V = v * evaluate(f, x)
    h = x[1]
    h2 = h * h
    V0, V1 = V[0], V[1]
    if n % 2 == 0:
        # psi'(0) = 0: Numerov about x = 0 with psi(-h) = psi(h).
        def start(E):
            w0 = 1.0 - h2 * (V0 - E) / 12.0
            w1 = w0 + 0.5 * h2 * (V0 - E)
            return 1.0, w1 / (1.0 - h2 * (V1 - E) / 12.0)
    else:
        def start(E):
            return 0.0, h * (1.0 + (V0 - E) * h2 / 6.0)
    return _Setup(x, V, 0, start, n // 2)


def _solve_setup(setup: _Setup, confining: bool, ceiling: float, tol: Tolerance) -> tuple[float, float, float]:
    target = setup.target
    E_lo = float(np.min(setup.V[setup.i0:]))
    if setup.nodes(E_lo) > target:
        raise NoBoundState("node count above target already at the potential minimum")
    if confining:
        gap = max(1.0, abs(E_lo))
        E_hi = E_lo + gap
        while setup.nodes(E_hi) <= target:
            gap *= 2.0
            E_hi = E_lo + gap
            if gap > 1e12:
                raise NoBoundState("could not bracket the requested level")
    else:
        if not E_lo < ceiling:
            raise NoBoundState("potential never dips below its large-r limit")
        E_hi = ceiling - 1e-12 * max(1.0, abs(E_lo))
        if setup.nodes(E_hi) <= target:
            raise NoBoundState(f"fewer than {target + 1} levels below the threshold {ceiling:g}")
    scale = max(1.0, abs(E_lo), abs(E_hi) if math.isfinite(E_hi) else 1.0)
    btol = Tolerance(abs_x=tol.abs_x * scale, abs_f=tol.abs_f, max_iter=tol.max_iter)
    try:
        lo, hi = bisect_predicate(lambda E: setup.nodes(E) > target, E_lo, E_hi, btol)
    except NoSignChange as exc:
        raise NoBoundState(str(exc)) from exc
    return 0.5 * (lo + hi), lo, hi


def _tail(setup: _Setup, E: float, u: np.ndarray) -> tuple[int, int]:
    """(outer turning index, last index of monotone decay beyond it).

    Decay ends where |u| stops falling or u flips sign; past that point the
    integration is diverging.
    """
    below = np.nonzero(setup.V[setup.i0:] - E < 0)[0]
    turn = setup.i0 + (below[-1] if below.size else 0)
    tail = u[turn:]
    stop = (np.abs(tail[1:]) >= np.abs(tail[:-1])) | (np.sign(tail[1:]) != np.sign(tail[:-1]))
    hits = np.nonzero(stop)[0]
    return turn, turn + (int(hits[0]) if hits.size else tail.size - 1)


def _finish(setup: _Setup, E: float, lo: float, hi: float, n_total_fn) -> OracleResult:
    # Past the turning point the computed tail first decays, then blows up
    # once rounding in E is amplified; its smallest value says how well the
    # truncation is hidden.
    u = setup.profile(E)
    turn, low = _tail(setup, E, u)
    peak = float(np.max(np.abs(u[: turn + 1])))
    residual = float(abs(u[low])) / peak if peak > 0 else math.inf
    nodes_found = n_total_fn(setup.nodes(lo))
    return OracleResult(E=E, nodes_found=nodes_found, residual=residual, bracket_width=hi - lo,
                        r_max=float(setup.x[-1]), grid_n=setup.x.size - 1)


def _grid_for(r_max: float, grid_n: int) -> int:
    return max(grid_n, int(math.ceil(r_max / MAX_STEP)))


def solve_radial(problem: RadialProblem, tol: Tolerance = ORACLE_TOL) -> OracleResult:
    """Eigenvalue with problem.qn.n radial nodes of -u'' + [(k-1)(k-3)/(4r^2) + v f] u = E u."""
    confining, ceiling = _large_r_behaviour(problem.f, problem.v)
    if problem.r_max is not None:
        setup = _radial_setup(problem, problem.r_max, problem.grid_n)
        E, lo, hi = _solve_setup(setup, confining, ceiling, tol)
        if setup.decay_margin(E) < DECAY_MARGIN:
            raise TruncationTooSmall(f"r_max={problem.r_max:g} too small for E={E:.6g}")
        return _finish(setup, E, lo, hi, lambda k: k)

    if not confining and all(c >= 0 for c, q in problem.f.terms if q != 0) and problem.qn.m >= 1:
        raise NoBoundState(f"v f(r) never dips below its large-r limit for f = {problem.f}")

    L = _length_scale(problem.f, problem.v)
    r_max = 6.0 * L * (1 + problem.qn.n + problem.qn.k / 2)
    if not confining:
        r_max *= 4.0
    for _ in range(MAX_DOUBLINGS):
        setup = _radial_setup(problem, r_max, _grid_for(r_max, problem.grid_n))
        try:
            E, lo, hi = _solve_setup(setup, confining, ceiling, tol)
        except NoBoundState:
            if confining:
                raise
            r_max *= 2.0
            continue
        if setup.decay_margin(E) >= DECAY_MARGIN:
            return _finish(setup, E, lo, hi, lambda k: k)
        r_max *= 2.0
    raise TruncationTooSmall(f"no adequate truncation up to r_max={r_max:g}")


def solve_line(f: PotentialShape, v: float, n: int, x_max: Optional[float] = None,
               tol: Tolerance = ORACLE_TOL, grid_n: int = DEFAULT_GRID) -> OracleResult:
    """Eigenvalue with n sign changes of -psi'' + v f(x) psi = E psi on the whole line (f even)."""
    if f.domain != "line":
        raise ValueError("solve_line needs a full-line (even) potential shape")
    if not v > 0:
        raise ValueError("coupling must be positive")
    confining, ceiling = _large_r_behaviour(f, v)
    total = lambda half: 2 * half + (n % 2)
    if x_max is not None:
        setup = _line_setup(f, v, n, x_max, grid_n)
        E, lo, hi = _solve_setup(setup, confining, ceiling, tol)
        if setup.decay_margin(E) < DECAY_MARGIN:
            raise TruncationTooSmall(f"x_max={x_max:g} too small for E={E:.6g}")
        return _finish(setup, E, lo, hi, total)

    x_max = 6.0 * _length_scale(f, v) * (1 + math.sqrt(n + 0.5))
    for _ in range(MAX_DOUBLINGS):
        setup = _line_setup(f, v, n, x_max, _grid_for(x_max, grid_n))
        E, lo, hi = _solve_setup(setup, confining, ceiling, tol)
        if setup.decay_margin(E) >= DECAY_MARGIN:
            return _finish(setup, E, lo, hi, total)
        x_max *= 2.0
    raise TruncationTooSmall(f"no adequate truncation up to x_max={x_max:g}")


def solve(f: PotentialShape, v: float, qn: QuantumNumbers, **kw) -> OracleResult:
    """Dispatch on the quantum-number mode."""
    if qn.mode == "line":
        return solve_line(f, v, qn.n, **kw)
    r_max = kw.pop("x_max", None)
    return solve_radial(RadialProblem(f, v, qn, r_max=r_max, **kw))


def eigenfunction(f: PotentialShape, v: float, qn: QuantumNumbers, result: OracleResult) -> tuple[np.ndarray, np.ndarray]:
    """Grid and (unnormalized) eigenfunction at a solved energy, on the sampled half.

    The tail is cut to zero past its smallest value beyond the outer turning
    point, where the integration starts to diverge.
    """
    if qn.mode == "line":
        setup = _line_setup(f, v, qn.n, result.r_max, result.grid_n)
    else:
        setup = _radial_setup(RadialProblem(f, v, qn), result.r_max, result.grid_n)
    u = setup.profile(result.E)
    _, low = _tail(setup, result.E, u)
    u[low + 1:] = 0.0
    return setup.x, u


def energy_curve_sample(f: PotentialShape, qn: QuantumNumbers, v_grid: Iterable[float]) -> list[tuple[float, float]]:
    """(v, E) samples of F_n(v); a failed point is logged and carries E = nan."""
    out = []
    for v in v_grid:
        try:
            E = solve(f, v, qn).E
        except (NoBoundState, TruncationTooSmall) as exc:
            log.warning("oracle failed at v=%g: %s", v, exc)
            E = math.nan
        out.append((float(v), E))
    return out


def oracle_curve(f: PotentialShape, qn: QuantumNumbers, v_lo: float, v_hi: float,
                 margin: float = 1.5, tol: Tolerance = CURVE_TOL) -> EnergyCurve:
    """F_n(v) on [v_lo, v_hi] at one fixed truncation and grid.

    Freezing the discretization keeps its error a smooth function of v, so
    finite differences of the curve stay clean; the tighter energy tolerance
    keeps bisection noise out of them.
    """
    probe_small = solve(f, v_lo, qn)
    probe_large = solve(f, v_hi, qn)
    x_max = margin * max(probe_small.r_max, probe_large.r_max)
    grid_n = _grid_for(x_max, max(probe_small.grid_n, probe_large.grid_n))

    def value(v):
        if qn.mode == "line":
            return solve_line(f, v, qn.n, x_max=x_max, grid_n=grid_n, tol=tol).E
        return solve_radial(RadialProblem(f, v, qn, r_max=x_max, grid_n=grid_n), tol).E

    return EnergyCurve(value, rel_step=CURVE_REL_STEP)
