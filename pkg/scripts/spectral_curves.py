"""Data behind the two spectral-curve panels for -Delta + v(-1/r + r^2), k = 7, n = 0.

Panel "tangent": energy curves v a(t) + H(v b(t)) of single tangent potentials
at a few contact points t, for the Coulomb (below) and oscillator (above)
families, together with the oracle curve they enclose.

Panel "envelope": the optimized lower and upper spectral curves and the oracle.

Writes two CSV files; no plotting here.

    python scripts/spectral_curves.py --out-dir out/
"""
from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from spectral_envelope.base_spectra import QuantumNumbers, spectrum_for_shape
from spectral_envelope.envelope import bound_sweep
from spectral_envelope.oracle import energy_curve_sample
from spectral_envelope.potentials import PotentialShape, tangent_coefficients


@dataclass
class CurveConfig:
    v_lo: float = 0.1
    v_hi: float = 10.0
    points: int = 41
    contacts: tuple[float, ...] = (0.6, 0.9, 1.2, 1.6, 2.2)
    d: int = 3
    l: int = 2
    n: int = 0
    potential: PotentialShape = field(default_factory=lambda: PotentialShape(((-1.0, -1.0), (1.0, 2.0))))
    lower_base: PotentialShape = field(default_factory=lambda: PotentialShape(((-1.0, -1.0),)))
    upper_base: PotentialShape = field(default_factory=lambda: PotentialShape(((1.0, 2.0),)))


def tangent_curves(cfg: CurveConfig, grid: np.ndarray, oracle: list[float]) -> list[list]:
    qn = QuantumNumbers(n=cfg.n, d=cfg.d, l=cfg.l)
    rows = []
    for label, h in (("coulomb", cfg.lower_base), ("oscillator", cfg.upper_base)):
        base = spectrum_for_shape(h, qn)
        for t in cfg.contacts:
            tc = tangent_coefficients(cfg.potential, h, t)
            for v, E in zip(grid, oracle):
                rows.append([label, t, v, v * tc.a + base.energy(v * tc.b), E])
    return rows


def envelope_curves(cfg: CurveConfig, grid: np.ndarray, oracle: list[float]) -> list[list]:
    qn = QuantumNumbers(n=cfg.n, d=cfg.d, l=cfg.l)
    lower = bound_sweep(cfg.potential, cfg.lower_base, spectrum_for_shape(cfg.lower_base, qn), qn, grid)
    upper = bound_sweep(cfg.potential, cfg.upper_base, spectrum_for_shape(cfg.upper_base, qn), qn, grid)
    return [[v, lo.value, E, hi.value] for v, lo, E, hi in zip(grid, lower, oracle, upper)]


def write(path: Path, header: list[str], rows: list[list]):
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows([[format(x, ".12g") if isinstance(x, float) else x for x in r] for r in rows])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=Path, default=Path("."))
    ap.add_argument("--points", type=int, default=CurveConfig.points)
    args = ap.parse_args()
    cfg = CurveConfig(points=args.points)
    grid = np.geomspace(cfg.v_lo, cfg.v_hi, cfg.points)
    qn = QuantumNumbers(n=cfg.n, d=cfg.d, l=cfg.l)
    oracle = [E for _, E in energy_curve_sample(cfg.potential, qn, grid)]
    args.out_dir.mkdir(parents=True, exist_ok=True)
    write(args.out_dir / "tangent_curves.csv", ["family", "t", "v", "energy", "oracle"],
          tangent_curves(cfg, grid, oracle))
    rows = envelope_curves(cfg, grid, oracle)
    write(args.out_dir / "envelope_curves.csv", ["v", "lower", "oracle", "upper"], rows)
    inside = sum(lo < E < hi for _, lo, E, hi in rows)
    print(f"{inside}/{len(rows)} couplings with lower < oracle < upper; wrote {args.out_dir}")


if __name__ == "__main__":
    main()
