import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectral_envelope.errors import IndefiniteConvexity, NonAttractive
from spectral_envelope.kinetic import (EnergyCurve, KineticPotential,
                                       energy_from_kinetic, legendre_to_energy, legendre_to_kinetic,
                                       power_curve, power_kinetic, power_kinetic_potential,
                                       semiclassical_energy, transform_kinetic)
from spectral_envelope.numerics import finite_diff
from spectral_envelope.potentials import PotentialShape

from conftest import COMBO, COULOMB, OSC_LINE, OSC_RADIAL, QUARTIC

# hydrogen-type curve F = -v^2 / (4 P^2) has kinetic potential -sqrt(s) / P
HYDROGEN = EnergyCurve(lambda v: -v * v / 4, lambda v: -v / 2)
HYDROGEN_BAR = power_kinetic_potential(-1.0, 1.0)


def test_legendre_to_kinetic_examples():
    s, fb = legendre_to_kinetic(power_curve(1.0, 2.0), 1.0)
    assert (s, fb) == pytest.approx((0.5, 0.5))
    s, fb = legendre_to_kinetic(power_curve(5.0, 2.0), 4.0)
    assert (s, fb) == pytest.approx((5.0, 1.25))
    s, fb = legendre_to_kinetic(HYDROGEN, 2.0)
    assert (s, fb) == pytest.approx((1.0, -1.0))
    assert HYDROGEN_BAR(1.0) == -1.0


def test_legendre_to_kinetic_numeric_slope():
    s, fb = legendre_to_kinetic(EnergyCurve(lambda v: math.sqrt(v)), 1.0)
    assert abs(s - 0.5) < 1e-10 and abs(fb - 0.5) < 1e-10


def test_legendre_to_energy_examples():
    v, F = legendre_to_energy(power_kinetic_potential(2.0, 0.5), 0.5)
    assert (v, F) == pytest.approx((1.0, 1.0))
    v, F = legendre_to_energy(HYDROGEN_BAR, 1.0)
    assert (v, F) == pytest.approx((2.0, -1.0))


def test_legendre_non_attractive():
    with pytest.raises(NonAttractive):
        legendre_to_energy(KineticPotential(lambda s: -1 / math.sqrt(s)), 1.0)


CURVES = [
    (power_curve(1.0, 2.0), power_kinetic_potential(2.0, 0.5)),
    (power_curve(7.0, 2.0), power_kinetic_potential(2.0, 3.5)),
    (power_curve(-1 / 36, -1.0), power_kinetic_potential(-1.0, 3.0)),
    (HYDROGEN, HYDROGEN_BAR),
]


@given(st.sampled_from(CURVES), st.floats(0.05, 20))
def test_round_trip(pair, v):
    F, fbar = pair
    s, fb = legendre_to_kinetic(F, v)
    assert fb == pytest.approx(fbar(s), rel=1e-12)
    v2, F2 = legendre_to_energy(fbar, s)
    assert abs(v2 - v) < 1e-8 * max(1, v) and abs(F2 - F(v)) < 1e-8 * max(1, abs(F(v)))


@given(st.sampled_from(CURVES), st.floats(0.2, 10))
def test_curvature_product_and_signs(pair, v):
    F, fbar = pair
    s, _ = legendre_to_kinetic(F, v)
    d2F = finite_diff(F, v, 2, 1e-3 * v, points=5)
    d2f = finite_diff(fbar, s, 2, 1e-3 * s, points=5)
    assert d2F < 0 < d2f
    assert abs(d2F * d2f * v ** 3 + 1) < 1e-4


def test_power_kinetic_examples():
    assert power_kinetic(2, 0.5, 1) == 0.25
    assert power_kinetic(-1, 3, 9) == -1
    assert power_kinetic(2, 3.5, 12.25) == 1


def test_energy_from_kinetic_examples():
    assert abs(energy_from_kinetic(lambda s: 0.25 / s, 1.0) - 1.0) < 1e-12
    assert abs(energy_from_kinetic(lambda s: 0.0625 / s ** 2, 1.0) - 0.75) < 1e-12
    assert abs(energy_from_kinetic(HYDROGEN_BAR, 1.0) + 0.25) < 1e-12


@given(st.sampled_from([0.5, 1.0, 2.0, 10.0]), st.integers(0, 3), st.sampled_from([-1.0, 2.0]))
def test_energy_from_kinetic_matches_scaling(v, n, q):
    from spectral_envelope.base_spectra import QuantumNumbers, power_law_spectrum
    spec = power_law_spectrum(q, QuantumNumbers(n=n, d=3, l=1))
    E = energy_from_kinetic(lambda s: power_kinetic(q, spec.P, s), v)
    assert abs(E - spec.energy(v)) < 1e-8 * max(1, abs(E))


def test_semiclassical_examples():
    assert abs(semiclassical_energy(3.0, COMBO, 1.0) - 5.41553) < 5e-6
    assert abs(semiclassical_energy(3.5, COMBO, 1.0) - 6.46028) < 5e-6
    for n in range(4):
        assert abs(semiclassical_energy(n + 0.5, OSC_LINE, 1.0) - (2 * n + 1)) < 1e-10


@given(st.floats(0.3, 4), st.floats(0.3, 5), st.sampled_from([(1.0, 2.0), (1.0, 4.0), (-1.0, -1.0), (1.0, 1.0)]))
def test_semiclassical_equals_kinetic_for_powers(P, v, term):
    c, q = term
    f = PotentialShape(((c, q),))
    E1 = semiclassical_energy(P, f, v)
    E2 = energy_from_kinetic(lambda s: c * (P / math.sqrt(s)) ** q, v)
    assert abs(E1 - E2) < 1e-8 * max(1, abs(E1))


@given(st.floats(0.1, 10), st.integers(0, 3))
def test_transform_kinetic_quartic(s, n):
    P = n + 0.5
    assert transform_kinetic(QUARTIC, OSC_LINE, lambda s: P * P / s, s) == pytest.approx(P ** 4 / s ** 2, rel=1e-12)


@given(st.floats(0.1, 10))
def test_transform_kinetic_identity(s):
    hbar = lambda s: 3.5 ** 2 / s
    assert transform_kinetic(OSC_RADIAL, OSC_RADIAL, hbar, s) == pytest.approx(hbar(s), rel=1e-12)


@given(st.floats(0.1, 10))
def test_transform_kinetic_combo(s):
    hbar = power_kinetic_potential(-1.0, 3.0)
    assert transform_kinetic(COMBO, COULOMB, hbar, s) == pytest.approx(hbar(s) + 9 / s, rel=1e-12)


def test_transform_kinetic_rejects_indefinite():
    f = PotentialShape(((-1.0, -1.0), (1.0, 4.0), (-3.0, 2.0)))
    with pytest.raises(IndefiniteConvexity):
        transform_kinetic(f, OSC_RADIAL, lambda s: 1 / s, 1.0)


@pytest.mark.parametrize("v", [0.7, 1.5, 3.0])
def test_transform_is_one_sided(v):
    # quartic: g convex, so g(hbar(s)) <= fbar(s); fbar from the oracle curve at the matched s
    from spectral_envelope.base_spectra import QuantumNumbers
    from spectral_envelope.oracle import oracle_curve
    F = oracle_curve(QUARTIC, QuantumNumbers.line(0), 0.5, 4.0)
    s, fbar = legendre_to_kinetic(F, v)
    assert transform_kinetic(QUARTIC, OSC_LINE, lambda s: 0.25 / s, s) < fbar
