"""Scalar numerical utilities: bracketing, golden-section search, bisection,
finite differences and orthogonal-polynomial recurrences.

Everything here is a pure function of its arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .errors import BracketInvalid, NoBracketFound, NoConvergence, NoSignChange

Objective = Callable[[float], float]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 0.618...
GROW = 1.0 / INV_PHI  # 1.618...

DEFAULT_SPAN = 1e12


@dataclass(frozen=True)
class Tolerance:
    abs_x: float = 1e-10
    abs_f: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not self.abs_x > 0 or not self.abs_f > 0:
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")

    def scaled(self, factor: float) -> "Tolerance":
        return Tolerance(self.abs_x * factor, self.abs_f * factor, self.max_iter)


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class Bracket:
    lo: float
    mid: float
    hi: float

    def __post_init__(self):
        if not (self.lo < self.mid < self.hi):
            raise BracketInvalid(f"need lo < mid < hi, got {self.lo}, {self.mid}, {self.hi}")


class MinimizeResult(NamedTuple):
    x: float
    fun: float
    nit: int


def _safe(objective: Objective) -> Objective:
    # NaN compares false against everything; map it to +inf so it reads as "uphill".
    def wrapped(x):
        y = objective(x)
        return math.inf if y != y else y
    return wrapped


def golden_section(objective: Objective, bracket: Bracket, tol: Tolerance = DEFAULT_TOL) -> MinimizeResult:
    """Golden-section search inside a valid three-point bracket."""
    f = _safe(objective)
    a, b, c = bracket.lo, bracket.mid, bracket.hi
    fb = f(b)
    if not fb < min(f(a), f(c)):
        raise BracketInvalid("objective(mid) must be below both endpoints")

    # Place the second interior point in the larger sub-interval.
    if c - b > b - a:
        x1, f1 = b, fb
        x2 = b + (1.0 - INV_PHI) * (c - b)
        f2 = f(x2)
    else:
        x2, f2 = b, fb
        x1 = b - (1.0 - INV_PHI) * (b - a)
        f1 = f(x1)

    nit = 0
    while c - a > tol.abs_x:
        nit += 1
        if nit > tol.max_iter:
            raise NoConvergence(f"golden section: width {c - a:.3e} after {tol.max_iter} iterations")
        # New points go into the outer segment, so x1 < x2 holds for any start.
        if f2 < f1:
            a, x1, f1 = x1, x2, f2
            x2 = x1 + (1.0 - INV_PHI) * (c - x1)
            f2 = f(x2)
        else:
            c, x2, f2 = x2, x1, f1
            x1 = x2 - (1.0 - INV_PHI) * (x2 - a)
            f1 = f(x1)
    if f1 < f2:
        return MinimizeResult(x1, f1, nit)
    return MinimizeResult(x2, f2, nit)


def minimize_scalar(objective: Objective, bracket: Bracket, tol: Tolerance = DEFAULT_TOL) -> tuple[float, float]:
    res = golden_section(objective, bracket, tol)
    return res.x, res.fun


def bracket_minimum(objective: Objective, x0: float, step: float,
                    span: float = DEFAULT_SPAN, max_steps: int = 500) -> Bracket:
    """Expand geometrically downhill from ``x0`` until the objective turns up.

    Raises NoBracketFound once the search leaves ``[x0 - span, x0 + span]``,
    which is how a monotone or unbounded-below objective shows up.
    """
    f = _safe(objective)
    if step <= 0:
        raise ValueError("step must be positive")
    fa = f(x0)
    if math.isinf(fa):
        raise NoBracketFound(f"objective not finite at x0={x0}")
    a, b = x0, x0 + step
    fb = f(b)
    if not fb < fa:
        b_alt = x0 - step
        fb_alt = f(b_alt)
        if not fb_alt < fa:
            if fa < fb and fa < fb_alt:
                return Bracket(b_alt, x0, b)
            raise NoBracketFound(f"objective flat around x0={x0}")
        b, fb = b_alt, fb_alt
    c = b + GROW * (b - a)
    fc = f(c)
    steps = 0
    while not fc > fb:
        if abs(c - x0) > span or steps > max_steps:
            raise NoBracketFound(f"no minimum within span {span:g} of x0={x0}")
        if fc < fb:
            a, b, fb = b, c, fc
            c = b + GROW * (b - a)
        else:
            # exact tie (plateau): keep the strictly lower midpoint, push the far end out
            c = c + GROW * (c - b)
        fc = f(c)
        steps += 1
    lo, hi = (a, c) if a < c else (c, a)
    return Bracket(lo, b, hi)


def minimize_positive(objective: Objective, x0: float = 1.0, tol: Tolerance = DEFAULT_TOL,
                      span: float = DEFAULT_SPAN) -> MinimizeResult:
    """Minimize over x > 0 by bracketing and searching in log x.

    ``span`` is a multiplicative range: the search gives up outside
    ``[x0 / span, x0 * span]``.
    """
    g = lambda y: objective(math.exp(y))
    y0 = math.log(x0)
    br = bracket_minimum(g, y0, 0.5, span=math.log(span))
    res = golden_section(g, br, tol)
    return MinimizeResult(math.exp(res.x), res.fun, res.nit)


def minimize_log_scan(objective: Objective, lo: float = 1e-6, hi: float = 1e6,
                      num: int = 121, tol: Tolerance = DEFAULT_TOL) -> MinimizeResult:
    """Coarse scan on a log-spaced grid over [lo, hi], then golden section in log x.

    A best scan point on either end of the grid means the optimum is not
    interior; that is reported as NoBracketFound.
    """
    f = _safe(objective)
    ylo, yhi = math.log(lo), math.log(hi)
    ys = [ylo + (yhi - ylo) * i / (num - 1) for i in range(num)]
    vals = [f(math.exp(y)) for y in ys]
    i = min(range(num), key=vals.__getitem__)
    if math.isinf(vals[i]):
        raise NoBracketFound("objective infinite on the whole scan")
    if i == 0 or i == num - 1:
        raise NoBracketFound(f"scan optimum on the boundary x={math.exp(ys[i]):.3g}")
    if not (vals[i] < vals[i - 1] and vals[i] < vals[i + 1]):
        raise NoBracketFound("flat objective, no strict interior minimum")
    g = lambda y: f(math.exp(y))
    res = golden_section(g, Bracket(ys[i - 1], ys[i], ys[i + 1]), tol)
    return MinimizeResult(math.exp(res.x), res.fun, res.nit + num)


def bisect_root(fn: Objective, lo: float, hi: float, tol: Tolerance = DEFAULT_TOL) -> float:
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if not flo * fhi < 0:
        raise NoSignChange(f"fn({lo})={flo:g} and fn({hi})={fhi:g} have the same sign")
    for _ in range(tol.max_iter):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0 or abs(fm) <= tol.abs_f or (hi - lo) <= tol.abs_x:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    raise NoConvergence(f"bisection width {hi - lo:.3e} after {tol.max_iter} iterations")


def illinois_root(fn: Objective, lo: float, hi: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Bracketed root by regula falsi with the Illinois halving of the stale end.

    Superlinear on smooth functions; each step keeps a sign change, so it is as
    safe as bisection.
    """
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if not flo * fhi < 0:
        raise NoSignChange(f"fn({lo})={flo:g} and fn({hi})={fhi:g} have the same sign")
    side = 0
    for _ in range(tol.max_iter):
        x = (lo * fhi - hi * flo) / (fhi - flo)
        if not lo < x < hi:
            x = 0.5 * (lo + hi)
        fx = fn(x)
        if fx == 0 or abs(fx) <= tol.abs_f:
            return x
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi = x, fx
            if side == 1:
                flo *= 0.5
            side = 1
        if hi - lo <= tol.abs_x:
            return x
    raise NoConvergence(f"Illinois width {hi - lo:.3e} after {tol.max_iter} iterations")


def bisect_predicate(pred: Callable[[float], bool], lo: float, hi: float,
                     tol: Tolerance = DEFAULT_TOL) -> tuple[float, float]:
    """Shrink [lo, hi] around the switch point of a monotone predicate.

    ``pred(lo)`` must be False and ``pred(hi)`` True; returns the final
    (lo, hi) pair.
    """
    if pred(lo) or not pred(hi):
        raise NoSignChange("predicate does not switch on the interval")
    for _ in range(tol.max_iter):
        if hi - lo <= tol.abs_x:
            return lo, hi
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return lo, hi
        if pred(mid):
            hi = mid
        else:
            lo = mid
    raise NoConvergence(f"predicate bisection width {hi - lo:.3e}")


def finite_diff(fn: Objective, x: float, order: int = 1, step: float = 1e-4, points: int = 3) -> float:
    """Central-difference derivative of order 1 or 2 (3- or 5-point stencil)."""
    h = step
    if order == 1:
        if points == 3:
            return (fn(x + h) - fn(x - h)) / (2 * h)
        return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h)
    if order == 2:
        if points == 3:
            return (fn(x + h) - 2 * fn(x) + fn(x - h)) / (h * h)
        return (-fn(x + 2 * h) + 16 * fn(x + h) - 30 * fn(x) + 16 * fn(x - h) - fn(x - 2 * h)) / (12 * h * h)
    raise ValueError("order must be 1 or 2")


def richardson_derivative(fn: Objective, x: float, step: float, order: int = 1) -> float:
    """One Richardson step on the 3-point central difference: O(step^4) error."""
    d1 = finite_diff(fn, x, order, step)
    d2 = finite_diff(fn, x, order, step / 2)
    return (4 * d2 - d1) / 3


def hermite(n: int, y: float) -> float:
    """Physicists' Hermite polynomial H_n(y) by upward recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    h0, h1 = 1.0, 2.0 * y
    if n == 0:
        return h0
    for j in range(1, n):
        h0, h1 = h1, 2.0 * y * h1 - 2.0 * j * h0
    return h1


def laguerre(n: int, alpha: float, x: float) -> float:
    """Generalized Laguerre polynomial L_n^(alpha)(x) by upward recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    l0, l1 = 1.0, 1.0 + alpha - x
    if n == 0:
        return l0
    for j in range(1, n):
        l0, l1 = l1, ((2 * j + 1 + alpha - x) * l1 - (j + alpha) * l0) / (j + 1)
    return l1
