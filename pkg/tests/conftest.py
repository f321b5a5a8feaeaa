import math

from hypothesis import HealthCheck, settings

from spectral_envelope.base_spectra import QuantumNumbers, spectrum_for_shape
from spectral_envelope.potentials import PotentialShape

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

QUARTIC = PotentialShape(((1.0, 4.0),), "line")
OSC_LINE = PotentialShape(((1.0, 2.0),), "line")
COMBO = PotentialShape(((-1.0, -1.0), (1.0, 2.0)))
COULOMB = PotentialShape(((-1.0, -1.0),))
OSC_RADIAL = PotentialShape(((1.0, 2.0),))
K7 = QuantumNumbers(n=0, d=3, l=2)

# 9/r^2 - 1/r + r^2 and 12.25/r^2 - 1/r + r^2 minimized over r
COMBO_LOWER = 5.41553
COMBO_UPPER = 6.46028
# combo level at k = 7, n = 0, v = 1 from the shooting oracle; an independent
# tridiagonal finite-difference solve agrees to ~4e-8
COMBO_ORACLE = 6.390397858


def quartic_exact(n, v=1.0):
    return 0.75 * v ** (1 / 3) * (2 * n + 1) ** (4 / 3)


def line_base(n):
    return spectrum_for_shape(OSC_LINE, QuantumNumbers.line(n))


def radial_qn(n=0, d=3, l=2):
    return QuantumNumbers(n=n, d=d, l=l)


def close(a, b, tol):
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
