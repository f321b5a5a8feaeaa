"""Lower bounds for -d^2/dx^2 + x^4 from the oscillator envelope, against the shooting oracle.

    python scripts/quartic_table.py --levels 6
"""
from __future__ import annotations

import argparse

from spectral_envelope.base_spectra import QuantumNumbers, spectrum_for_shape
from spectral_envelope.envelope import envelope_bound_kinetic, envelope_bound_tangent
from spectral_envelope.local_energy import local_energy_bound
from spectral_envelope.oracle import solve
from spectral_envelope.potentials import PotentialShape

QUARTIC = PotentialShape(((1.0, 4.0),), "line")
OSC = PotentialShape(((1.0, 2.0),), "line")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=4)
    ap.add_argument("--v", type=float, default=1.0)
    args = ap.parse_args()
    print(f"{'n':>2}  {'tangent':>12}  {'kinetic':>12}  {'local':>12}  {'closed form':>12}  {'oracle':>12}  ratio")
    for n in range(args.levels):
        qn = QuantumNumbers.line(n)
        base = spectrum_for_shape(OSC, qn)
        vals = [fn(QUARTIC, OSC, base, args.v).value
                for fn in (envelope_bound_tangent, envelope_bound_kinetic, local_energy_bound)]
        closed = 0.75 * args.v ** (1 / 3) * (2 * n + 1) ** (4 / 3)
        E = solve(QUARTIC, args.v, qn).E
        print(f"{n:>2}  " + "  ".join(f"{x:12.8f}" for x in (*vals, closed, E)) + f"  {vals[0] / E:.5f}")


if __name__ == "__main__":
    main()
