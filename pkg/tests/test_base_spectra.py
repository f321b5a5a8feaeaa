import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectral_envelope.base_spectra import (Family, QuantumNumbers, TrialFunction, energy_from_p,
                                            eigenvalue_curve, p_from_energy, p_number, power_law_spectrum,
                                            spectrum_for_shape, trial_eigendata, trial_eval, trial_parameter,
                                            trial_residual, unit_eigenvalue)
from spectral_envelope.errors import ConfigError, UnsupportedExponent
from spectral_envelope.potentials import PotentialShape

from conftest import COULOMB, K7, OSC_LINE, OSC_RADIAL


def test_k():
    assert K7.k == 7 and K7.m == 3
    assert QuantumNumbers(d=1, l=0).k_eff == 3


@pytest.mark.parametrize("kw", [dict(n=-1), dict(l=-1), dict(d=0), dict(mode="plane")])
def test_quantum_number_validation(kw):
    with pytest.raises(ValueError):
        QuantumNumbers(**kw)


def test_p_number_examples():
    assert p_number(-1, K7) == 3
    assert p_number(2, K7) == 3.5
    for n in range(5):
        assert p_number(2, QuantumNumbers.line(n)) == n + 0.5


@pytest.mark.parametrize("q", [0.0, -2.0, -3.0])
def test_p_number_bad_exponent(q):
    with pytest.raises(UnsupportedExponent):
        p_number(q, K7)


def test_p_number_general_q_needs_E1():
    with pytest.raises(ValueError):
        p_number(4.0, QuantumNumbers.line(0))
    P = p_number(4.0, QuantumNumbers.line(0), E1=1.0603620904867)
    assert math.isclose(energy_from_p(4.0, P), 1.0603620904867, rel_tol=1e-12)


def test_eigenvalue_curve_examples():
    assert eigenvalue_curve(power_law_spectrum(2, QuantumNumbers.line(0)), 4.0) == 2.0
    assert eigenvalue_curve(power_law_spectrum(2, QuantumNumbers.line(2)), 1.0) == 5.0
    assert eigenvalue_curve(power_law_spectrum(-1, QuantumNumbers(n=0, d=3, l=0)), 1.0) == pytest.approx(-0.25, abs=1e-15)


@given(st.integers(0, 6), st.integers(1, 6), st.integers(0, 4), st.sampled_from([-1.0, 2.0]))
def test_p_relation_self_consistent(n, d, l, q):
    qn = QuantumNumbers(n=n, d=d, l=l)
    E1 = unit_eigenvalue(q, qn)
    assert math.isclose(p_from_energy(q, E1), p_number(q, qn), rel_tol=1e-12)
    assert math.isclose(energy_from_p(q, p_number(q, qn)), E1, rel_tol=1e-12)


@given(st.integers(0, 5), st.integers(3, 9), st.integers(1, 3), st.sampled_from([-1.0, 2.0]))
def test_p_number_dl_invariance(n, d, shift, q):
    l = 2
    a = QuantumNumbers(n=n, d=d, l=l)
    b = QuantumNumbers(n=n, d=d - 2, l=l + 1) if d > 2 else a
    assert p_number(q, a) == p_number(q, b)


@given(st.floats(0.01, 100), st.integers(0, 4), st.sampled_from([-1.0, 2.0]))
def test_scaling_law(u, n, q):
    spec = power_law_spectrum(q, QuantumNumbers(n=n, d=3, l=1))
    assert eigenvalue_curve(spec, u) == pytest.approx(eigenvalue_curve(spec, 1.0) * u ** (2 / (2 + q)), rel=1e-14)


def test_oracle_backed_unit_eigenvalue():
    # quartic ground state, cached after the first call
    E = unit_eigenvalue(4.0, QuantumNumbers.line(0))
    assert abs(E - 1.0603620904867) < 1e-8
    assert unit_eigenvalue(4.0, QuantumNumbers.line(0)) == E


def test_spectrum_for_shape_checks():
    with pytest.raises(ConfigError):
        spectrum_for_shape(PotentialShape(((1.0, -1.0),)), K7)
    with pytest.raises(ConfigError):
        spectrum_for_shape(OSC_LINE, K7)
    spec = spectrum_for_shape(PotentialShape(((3.0, 2.0),)), K7)
    assert spec.energy(1.0) == pytest.approx(7 * math.sqrt(3))


def test_trial_eval_examples():
    assert trial_eval(TrialFunction(Family.OSCILLATOR_1D, QuantumNumbers.line(0), 1.0), 0.0) == 1.0
    assert trial_eval(TrialFunction(Family.RADIAL_COULOMB, K7, 2.0), 1.0) == pytest.approx(math.exp(-1))
    assert trial_eval(TrialFunction(Family.RADIAL_OSCILLATOR, K7, 1.0), 2.0) == pytest.approx(8 * math.exp(-2))


def test_trial_eigendata_examples():
    assert trial_eigendata(TrialFunction(Family.OSCILLATOR_1D, QuantumNumbers.line(1), 4.0)) == (4.0, 6.0)
    u, H = trial_eigendata(TrialFunction(Family.RADIAL_COULOMB, K7, 1.7))
    assert u == pytest.approx(3 * 1.7) and H == pytest.approx(-1.7 ** 2 / 4)
    u, H = trial_eigendata(TrialFunction(Family.RADIAL_OSCILLATOR, K7, 1.3))
    assert u == pytest.approx(1.3 ** 2) and H == pytest.approx(7 * 1.3)


def test_trial_family_mode_mismatch():
    with pytest.raises(ValueError):
        TrialFunction(Family.OSCILLATOR_1D, K7, 1.0)
    with pytest.raises(ValueError):
        TrialFunction(Family.RADIAL_COULOMB, K7, 0.0)


FAMILIES = [(Family.OSCILLATOR_1D, "line"), (Family.RADIAL_COULOMB, "radial"),
            (Family.RADIAL_OSCILLATOR, "radial")]


@given(st.sampled_from(FAMILIES), st.integers(0, 4), st.integers(1, 7), st.integers(0, 4),
       st.floats(0.1, 10.0))
def test_trial_residual(fam_mode, n, d, l, t):
    family, mode = fam_mode
    qn = QuantumNumbers.line(n) if mode == "line" else QuantumNumbers(n=n, d=d, l=l)
    assert trial_residual(TrialFunction(family, qn, t)) < 1e-6


@given(st.sampled_from(FAMILIES), st.integers(0, 4), st.floats(0.3, 3.0))
def test_trial_node_count(fam_mode, n, t):
    family, mode = fam_mode
    qn = QuantumNumbers.line(n) if mode == "line" else QuantumNumbers(n=n, d=3, l=2)
    tf = TrialFunction(family, qn, t)
    L = 30.0 / t if family is Family.RADIAL_COULOMB else 8.0 / t ** 0.25
    x = np.linspace(-L if mode == "line" else 1e-3, L, 20001)
    phi = trial_eval(tf, x)
    phi = phi[np.abs(phi) > 1e-12 * np.abs(phi).max()]
    assert int(np.sum(np.signbit(phi[1:]) != np.signbit(phi[:-1]))) == n


@given(st.sampled_from(FAMILIES), st.integers(0, 3), st.floats(0.05, 50))
def test_trial_parameter_inverts_coupling(fam_mode, n, u):
    family, mode = fam_mode
    qn = QuantumNumbers.line(n) if mode == "line" else QuantumNumbers(n=n, d=3, l=2)
    t = trial_parameter(family, qn, u)
    assert trial_eigendata(TrialFunction(family, qn, t))[0] == pytest.approx(u, rel=1e-12)
