"""Command-line front end: bounds, sweeps, oracle solves and the verification suites.

Exit status: 0 success, 1 numerical failure (a bound or eigenvalue does not
exist / was not found), 2 configuration or usage error.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import click
import numpy as np

from .base_spectra import QuantumNumbers, family_for, spectrum_for_shape
from .envelope import BoundResult, Method, Side, bound_function, failed, side_for
from .errors import ConfigError, EnvelopeError, IndefiniteConvexity, NumericalFailure
from .local_energy import coincidence_check
from .numerics import DEFAULT_TOL, Tolerance
from .oracle import solve
from .potentials import PotentialShape, parse_potential, require_definite

TOL_ENV = "SPECTRAL_ENVELOPE_TOL"
SCHEMA_VERSION = "1.0"
SWEEP_HEADER = ("v", "lower", "upper", "oracle", "coincidence_delta", "error")
BOUND_HEADER = ("v", "base", "method", "side", "value", "optimizer", "iterations", "converged", "error")
ORACLE_HEADER = ("v", "oracle", "nodes", "residual", "r_max", "error")
ALL_METHODS = (Method.TANGENT, Method.KINETIC, Method.LOCAL_ENERGY)
METHOD_CHOICES = ("tangent", "kinetic", "local", "semiclassical", "all")


# ---------------------------------------------------------------- config

def fmt(x, digits: int = 12) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, (bool, int, str)):
        return str(x)
    return format(float(x), f".{digits}g")


def parse_grid(spec: str) -> tuple[float, ...]:
    """``x`` | ``x1,x2,...`` | ``lo:hi:count`` (geometric)."""
    spec = spec.strip()
    try:
        if ":" in spec:
            lo, hi, count = spec.split(":")
            lo, hi, count = float(lo), float(hi), int(count)
            if count < 1:
                raise ConfigError(f"grid count must be >= 1 in {spec!r}")
            if not 0 < lo:
                raise ConfigError(f"grid endpoints must be positive in {spec!r}")
            if count > 1 and not hi > lo:
                raise ConfigError(f"grid needs lo < hi in {spec!r}")
            grid = (lo,) if count == 1 else tuple(float(x) for x in np.geomspace(lo, hi, count))
        else:
            grid = tuple(float(x) for x in spec.split(","))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad coupling spec {spec!r}; use a number, a list a,b,c or lo:hi:count") from exc
    if not all(x > 0 and math.isfinite(x) for x in grid):
        raise ConfigError(f"couplings must be positive and finite: {spec!r}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError(f"couplings must be strictly increasing: {spec!r}")
    return grid


def resolve_tolerance(flag: Optional[float], env: Optional[str] = None) -> Tolerance:
    """--tol beats the environment variable, which beats the default."""
    value = flag
    if value is None and env:
        try:
            value = float(env)
        except ValueError:
            raise ConfigError(f"{TOL_ENV}={env!r} is not a number") from None
    if value is None:
        return DEFAULT_TOL
    if not value > 0:
        raise ConfigError(f"tolerance must be positive, got {value:g}")
    return Tolerance(abs_x=value, abs_f=DEFAULT_TOL.abs_f, max_iter=DEFAULT_TOL.max_iter)


@dataclass(frozen=True)
class RunConfig:
    mode: str
    potential: PotentialShape
    bases: tuple[PotentialShape, ...]
    qn: QuantumNumbers
    v: tuple[float, ...]
    methods: tuple[Method, ...]
    output: str = "table"
    tol: Tolerance = DEFAULT_TOL

    def echo(self) -> dict:
        return {
            "mode": self.mode,
            "potential": str(self.potential),
            "base": [str(b) for b in self.bases],
            "d": self.qn.d,
            "l": self.qn.l,
            "n": self.qn.n,
            "methods": [m.value for m in self.methods],
            "tol": self.tol.abs_x,
        }


def _methods(name: str, bases: Sequence[PotentialShape], mode: str) -> tuple[Method, ...]:
    if name == "all":
        # local only where a closed trial family exists for every base
        with_family = all(family_for(b.terms[0][1], mode) is not None for b in bases)
        return ALL_METHODS if with_family else (Method.TANGENT, Method.KINETIC)
    method = Method(name)
    if method is Method.LOCAL_ENERGY:
        for b in bases:
            if family_for(b.terms[0][1], mode) is None:
                raise ConfigError(f"--method local needs an oscillator or Coulomb base (got {b}); "
                                  "use tangent or kinetic")
    return (method,)


def build_config(mode: str, potential: Optional[str], bases: Sequence[str], d: int, l: int, n: int,
                 v: Optional[str], method: str = "all", output: str = "table",
                 tol: Optional[float] = None, need_base: bool = True) -> RunConfig:
    if potential is None:
        raise ConfigError("--potential is required, e.g. --potential -1:-1,1:2")
    if v is None:
        raise ConfigError("--v is required: a number, a list a,b,c or lo:hi:count")
    if need_base and not bases:
        raise ConfigError("--base is required, e.g. --base -1:-1 (Coulomb) or --base 1:2 (oscillator)")
    domain = "line" if mode == "line" else "half"
    f = parse_potential(potential, domain)
    hs = tuple(parse_potential(b, domain) for b in bases)
    for h in hs:
        if not h.is_single_power:
            raise ConfigError(f"base {h} must be a single power c:q")
    try:
        qn = QuantumNumbers.line(n) if mode == "line" else QuantumNumbers(n=n, d=d, l=l)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    for h in hs:
        try:
            spectrum_for_shape(h, qn)
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"base {h}: {exc}") from exc
    methods = _methods(method, hs, mode) if hs else ()
    return RunConfig(mode, f, hs, qn, parse_grid(v), methods, output,
                     resolve_tolerance(tol, os.environ.get(TOL_ENV)))


# ---------------------------------------------------------------- computation

def compute_bounds(config: RunConfig, v: float) -> list[tuple[str, BoundResult]]:
    """Every requested (base, method) bound at one coupling; failures are recorded."""
    out = []
    for h in config.bases:
        base = spectrum_for_shape(h, config.qn)
        try:
            side = side_for(require_definite(config.potential, h))
        except EnvelopeError as exc:
            out.extend((str(h), failed(m, exc)) for m in config.methods)
            continue
        for m in config.methods:
            try:
                res = bound_function(m)(config.potential, h, base, v, tol=config.tol)
            except EnvelopeError as exc:
                res = failed(m, exc, side)
            out.append((str(h), res))
    return out


@dataclass(frozen=True)
class SweepRow:
    v: float
    lower: float
    upper: float
    oracle: float
    coincidence_delta: float
    error: str
    bounds: tuple[tuple[str, BoundResult], ...] = ()

    def cells(self) -> list[str]:
        return [fmt(self.v), fmt(self.lower), fmt(self.upper), fmt(self.oracle),
                fmt(self.coincidence_delta), self.error]


def sweep_row(config: RunConfig, v: float, with_oracle: bool = True, with_delta: bool = True) -> SweepRow:
    errors = []
    bounds = compute_bounds(config, v)
    lowers = [r.value for _, r in bounds if r.converged and r.side in (Side.LOWER, Side.EXACT)]
    uppers = [r.value for _, r in bounds if r.converged and r.side in (Side.UPPER, Side.EXACT)]
    errors += [f"{h} {r.method.value}: {r.error}" for h, r in bounds if r.error]
    E = math.nan
    if with_oracle:
        try:
            E = solve(config.potential, v, config.qn).E
        except EnvelopeError as exc:
            errors.append(f"oracle: {type(exc).__name__}: {exc}")
    delta = math.nan
    if with_delta:
        deltas = []
        for h in config.bases:
            if family_for(h.terms[0][1], config.mode) is None:
                continue
            try:
                deltas.append(coincidence_check(config.potential, h, spectrum_for_shape(h, config.qn),
                                                v, tol=config.tol)[2])
            except EnvelopeError as exc:
                errors.append(f"coincidence {h}: {type(exc).__name__}: {exc}")
        if deltas:
            delta = max(deltas)
    return SweepRow(v, max(lowers, default=math.nan), min(uppers, default=math.nan), E, delta,
                    "; ".join(errors), tuple(bounds))


def run_sweep(config: RunConfig, with_oracle: bool = True, with_delta: bool = True,
              workers: int = 1) -> list[SweepRow]:
    """Rows in grid order regardless of completion order."""
    def one(v):
        return sweep_row(config, v, with_oracle, with_delta)

    if workers > 1 and len(config.v) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, config.v))
    return [one(v) for v in config.v]


# ---------------------------------------------------------------- output

def write_csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def read_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    return write_csv(SWEEP_HEADER, [r.cells() for r in rows])


def format_table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [[fmt(c, 6) if isinstance(c, float) else str(c) for c in row] for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)),
             "  ".join("-" * w for w in widths)]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def _json_float(x):
    return None if x is None or (isinstance(x, float) and not math.isfinite(x)) else float(x)


def bound_record(v: float, base: str, res: BoundResult, config: RunConfig) -> dict:
    rec = res.as_dict()
    rec["value"] = _json_float(rec["value"])
    rec["optimizer"] = _json_float(rec["optimizer"])
    rec.update(schema_version=SCHEMA_VERSION, v=v, base=base, config=config.echo())
    return rec


def sweep_record(row: SweepRow, config: RunConfig) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "v": row.v,
        "lower": _json_float(row.lower),
        "upper": _json_float(row.upper),
        "oracle": _json_float(row.oracle),
        "coincidence_delta": _json_float(row.coincidence_delta),
        "error": row.error or None,
        "bounds": [bound_record(row.v, h, r, config) for h, r in row.bounds],
        "config": config.echo(),
    }


def _round12(obj):
    """Round floats to 12 significant digits so JSON matches the CSV precision."""
    if isinstance(obj, float):
        return float(fmt(obj)) if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round12(v) for v in obj]
    return obj


def dump_json(records: list) -> str:
    return json.dumps(_round12(records), indent=2) + "\n"


# ---------------------------------------------------------------- commands

def _exit_code(exc: EnvelopeError) -> int:
    if isinstance(exc, (NumericalFailure, IndefiniteConvexity)):
        return 1
    return 2


def _fail(exc: EnvelopeError):
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    sys.exit(_exit_code(exc))


def _emit(text: str, out_path: Optional[str]):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


common = [
    click.option("--mode", type=click.Choice(["line", "radial"]), default="radial", show_default=True),
    click.option("--potential", help="Shape f as coeff:exp,coeff:exp (e.g. -1:-1,1:2)."),
    click.option("--d", "d", type=int, default=3, show_default=True, help="Dimension (radial mode)."),
    click.option("--l", "l", type=int, default=0, show_default=True, help="Angular momentum (radial mode)."),
    click.option("--n", "n", type=int, default=0, show_default=True, help="Node count."),
    click.option("--v", "v", help="Coupling: x, x1,x2,... or lo:hi:count (geometric)."),
    click.option("--output", type=click.Choice(["table", "csv", "json"]), default="table", show_default=True),
    click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write to a file instead of stdout."),
    click.option("--tol", type=float, help=f"Optimizer x-tolerance (overrides ${TOL_ENV})."),
]


def with_common(fn):
    for opt in reversed(common):
        fn = opt(fn)
    return fn


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Envelope and local-energy bounds for -Delta + v f(r)."""


@main.command()
@with_common
@click.option("--base", "bases", multiple=True, help="Base power h as c:q (repeatable).")
@click.option("--method", type=click.Choice(METHOD_CHOICES), default="all", show_default=True)
def bound(mode, potential, d, l, n, v, output, out_path, tol, bases, method):
    """Bounds on the n-th eigenvalue for each base and method."""
    try:
        config = build_config(mode, potential, bases, d, l, n, v, method, output, tol)
        records = [(vv, h, r) for vv in config.v for h, r in compute_bounds(config, vv)]
    except EnvelopeError as exc:
        _fail(exc)
    if output == "json":
        text = dump_json([bound_record(vv, h, r, config) for vv, h, r in records])
    else:
        rows = [(vv, h, r.method.value, r.side.value, r.value, r.optimizer, r.iterations, r.converged,
                 r.error or "") for vv, h, r in records]
        if output == "csv":
            text = write_csv(BOUND_HEADER, [[fmt(c) for c in row] for row in rows])
        else:
            text = format_table(BOUND_HEADER, rows)
    _emit(text, out_path)
    bad = [r for _, _, r in records if not r.converged]
    for _, h, r in records:
        if r.error:
            click.echo(f"error: base {h} {r.method.value}: {r.error}", err=True)
    if bad:
        sys.exit(1)


@main.command()
@with_common
@click.option("--base", "bases", multiple=True, help="Base power h as c:q (repeatable).")
@click.option("--method", type=click.Choice(METHOD_CHOICES), default="kinetic", show_default=True)
@click.option("--oracle/--no-oracle", "with_oracle", default=True, show_default=True)
@click.option("--coincidence/--no-coincidence", "with_delta", default=True, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
def sweep(mode, potential, d, l, n, v, output, out_path, tol, bases, method, with_oracle, with_delta, workers):
    """Rows (v, lower, upper, oracle, coincidence_delta, error) over a coupling grid."""
    try:
        config = build_config(mode, potential, bases, d, l, n, v, method, output, tol)
    except EnvelopeError as exc:
        _fail(exc)
    rows = run_sweep(config, with_oracle, with_delta, max(1, workers))
    if output == "csv":
        text = sweep_csv(rows)
    elif output == "json":
        text = dump_json([sweep_record(r, config) for r in rows])
    else:
        text = format_table(SWEEP_HEADER, [(r.v, r.lower, r.upper, r.oracle, r.coincidence_delta, r.error)
                                           for r in rows])
    _emit(text, out_path)


@main.command()
@with_common
def oracle(mode, potential, d, l, n, v, output, out_path, tol):
    """Shooting-method eigenvalue of -Delta + v f at each coupling."""
    try:
        config = build_config(mode, potential, (), d, l, n, v, output=output, tol=tol, need_base=False)
    except EnvelopeError as exc:
        _fail(exc)
    rows, failures = [], 0
    for vv in config.v:
        try:
            res = solve(config.potential, vv, config.qn)
            rows.append((vv, res.E, res.nodes_found, res.residual, res.r_max, ""))
        except EnvelopeError as exc:
            failures += 1
            rows.append((vv, math.nan, -1, math.nan, math.nan, f"{type(exc).__name__}: {exc}"))
    if output == "csv":
        text = write_csv(ORACLE_HEADER, [[fmt(c) for c in row] for row in rows])
    elif output == "json":
        text = dump_json([{"schema_version": SCHEMA_VERSION, "v": r[0], "oracle": _json_float(r[1]),
                           "nodes": r[2], "residual": _json_float(r[3]), "r_max": _json_float(r[4]),
                           "error": r[5] or None, "config": config.echo()} for r in rows])
    else:
        text = format_table(ORACLE_HEADER, rows)
    _emit(text, out_path)
    if failures:
        sys.exit(1)


@main.command()
@click.option("--suite", default="all", show_default=True,
              help="coincidence, roundtrip, sandwich, scaling, invariance or all.")
def verify(suite):
    """Cross-module invariant suites; nonzero exit on any failure."""
    from .verification import run_suite

    try:
        checks = run_suite(suite)
    except EnvelopeError as exc:
        _fail(exc)
    for c in checks:
        click.echo(str(c))
    failures = sum(not c.passed for c in checks)
    click.echo(f"{len(checks) - failures}/{len(checks)} checks passed")
    if failures:
        sys.exit(1)


if __name__ == "__main__":
    main()
