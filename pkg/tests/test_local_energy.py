import importlib
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectral_envelope.base_spectra import (Family, QuantumNumbers, TrialFunction, spectrum_for_shape,
                                            trial_eigendata, trial_eval, trial_residual)
from spectral_envelope.envelope import Method, Side, envelope_bound_tangent
from spectral_envelope.errors import ConfigError, NoRoot, TrialZero
from spectral_envelope.local_energy import (LocalEnergyProfile, coincidence_check, critical_parameter,
                                            inner_extremum, local_energy, local_energy_bound)
from spectral_envelope.oracle import solve

from conftest import (COMBO, COMBO_LOWER, COMBO_UPPER, COULOMB, K7, OSC_LINE, OSC_RADIAL, QUARTIC,
                      close, line_base, quartic_exact)

le = importlib.import_module("spectral_envelope.local_energy")
COULOMB_K7 = spectrum_for_shape(COULOMB, K7)
OSC_K7 = spectrum_for_shape(OSC_RADIAL, K7)


def _profile(family, qn, t, f, v=1.0, form="identity"):
    return LocalEnergyProfile(TrialFunction(family, qn, t), f, v, form)


# ---------------------------------------------------------------- local_energy

def test_quartic_local_energy_at_origin():
    p = _profile(Family.OSCILLATOR_1D, QuantumNumbers.line(0), 1.0, QUARTIC)
    assert local_energy(p, 0.0) == 1.0
    # t^(1/2)(2n+1) - t x^2 + x^4 at t = 1, x = 0.7
    assert close(local_energy(p, 0.7), 1 - 0.49 + 0.7 ** 4, 1e-15)


def test_exact_eigenfunction_has_flat_local_energy():
    for family, qn, h in ((Family.OSCILLATOR_1D, QuantumNumbers.line(2), OSC_LINE),
                          (Family.RADIAL_COULOMB, K7, COULOMB),
                          (Family.RADIAL_OSCILLATOR, QuantumNumbers(n=1, d=3, l=2), OSC_RADIAL)):
        t = 1.7
        u, H = trial_eigendata(TrialFunction(family, qn, t))
        p = _profile(family, qn, t, h, v=u)
        for r in (0.3, 1.0, 2.5):
            assert close(local_energy(p, r), H, 1e-12)


def test_combo_coulomb_trial_at_unit_point():
    # -phi''/phi + 6/r^2 - 1/r + r^2 for phi = r^3 exp(-r/2) at r = 1
    expected = -(6 - 3 + 0.25) + 6 - 1 + 1
    for form in ("identity", "numeric"):
        p = _profile(Family.RADIAL_COULOMB, K7, 1.0, COMBO, form=form)
        assert close(local_energy(p, 1.0), expected, 1e-7)
    assert expected == 2.75


def test_numeric_form_rejects_nodes():
    p = _profile(Family.OSCILLATOR_1D, QuantumNumbers.line(1), 1.0, QUARTIC, form="numeric")
    with pytest.raises(TrialZero):
        local_energy(p, 0.0)


def _sign_change_near(tf, r, gap=1e-3):
    lo = r - gap if tf.qn.mode == "line" else max(r - gap, 1e-9)
    grid = np.linspace(lo, r + gap, 41)
    vals = trial_eval(tf, grid)
    return bool(np.any(np.sign(vals[1:]) != np.sign(vals[:-1])))


@pytest.mark.parametrize("family,qn,f", [
    (Family.OSCILLATOR_1D, QuantumNumbers.line(0), QUARTIC),
    (Family.OSCILLATOR_1D, QuantumNumbers.line(3), QUARTIC),
    (Family.RADIAL_COULOMB, K7, COMBO),
    (Family.RADIAL_COULOMB, QuantumNumbers(n=1, d=3, l=2), COMBO),
    (Family.RADIAL_OSCILLATOR, K7, COMBO),
    (Family.RADIAL_OSCILLATOR, QuantumNumbers(n=2, d=3, l=2), COMBO),
])
def test_identity_matches_numeric_ratio(family, qn, f):
    for t in (0.5, 1.0, 2.0):
        tf = TrialFunction(family, qn, t)
        lo = -3.0 if qn.mode == "line" else 0.2
        for r in np.linspace(lo, 3.0, 37):
            if _sign_change_near(tf, r):
                continue
            a = local_energy(LocalEnergyProfile(tf, f, 1.3, "identity"), r)
            b = local_energy(LocalEnergyProfile(tf, f, 1.3, "numeric"), r)
            assert abs(a - b) < 1e-5, (t, r, a, b)


# ---------------------------------------------------------------- local_energy_bound

@pytest.mark.parametrize("n", range(4))
def test_quartic_local_bound(n):
    res = local_energy_bound(QUARTIC, OSC_LINE, line_base(n), 1.0)
    assert close(res.value, quartic_exact(n), 1e-8)
    assert res.side is Side.LOWER and res.method is Method.LOCAL_ENERGY


def test_combo_local_bounds():
    lo = local_energy_bound(COMBO, COULOMB, COULOMB_K7, 1.0)
    hi = local_energy_bound(COMBO, OSC_RADIAL, OSC_K7, 1.0)
    assert close(lo.value, COMBO_LOWER, 5e-6) and lo.side is Side.LOWER
    assert close(hi.value, COMBO_UPPER, 5e-6) and hi.side is Side.UPPER


def test_fixed_point_local_bound():
    for h, base in ((OSC_LINE, line_base(1)), (COULOMB, COULOMB_K7), (OSC_RADIAL, OSC_K7)):
        res = local_energy_bound(h, h, base, 2.0)
        assert res.side is Side.EXACT
        assert math.isclose(res.value, base.energy(2.0), rel_tol=1e-12)


def test_no_trial_family_is_config_error():
    quartic_base = spectrum_for_shape(QUARTIC, QuantumNumbers.line(0))
    with pytest.raises(ConfigError):
        local_energy_bound(QUARTIC, QUARTIC, quartic_base, 1.0)


def test_residual_gate_blocks_bad_trials(monkeypatch):
    le._residual_ok.cache_clear()
    monkeypatch.setattr(le, "trial_residual", lambda tf: 1.0)
    try:
        with pytest.raises(ConfigError, match="residual"):
            local_energy_bound(QUARTIC, OSC_LINE, line_base(0), 1.0)
    finally:
        le._residual_ok.cache_clear()


@given(family=st.sampled_from(list(Family)), n=st.integers(0, 4), l=st.integers(0, 3),
       d=st.integers(1, 5), t=st.floats(0.05, 20.0))
def test_stocked_trials_pass_the_residual_gate(family, n, l, d, t):
    qn = QuantumNumbers.line(n) if family is Family.OSCILLATOR_1D else QuantumNumbers(n=n, d=d, l=l)
    assert trial_residual(TrialFunction(family, qn, t)) < le.RESIDUAL_GATE


def test_bounds_against_oracle():
    for n in range(4):
        lower = local_energy_bound(QUARTIC, OSC_LINE, line_base(n), 1.0).value
        assert lower <= solve(QUARTIC, 1.0, QuantumNumbers.line(n)).E
    lo = local_energy_bound(COMBO, COULOMB, COULOMB_K7, 1.0).value
    hi = local_energy_bound(COMBO, OSC_RADIAL, OSC_K7, 1.0).value
    assert lo <= solve(COMBO, 1.0, K7).E <= hi


def test_inner_extremum_is_interior_for_convex_pairs():
    for f, h, base in ((QUARTIC, OSC_LINE, line_base(0)), (COMBO, COULOMB, COULOMB_K7)):
        res = local_energy_bound(f, h, base, 1.0)
        family = Family.OSCILLATOR_1D if h is OSC_LINE else Family.RADIAL_COULOMB
        inner = inner_extremum(_profile(family, base.qn, res.optimizer, f), "inf")
        assert 1e-3 < inner.x < 1e3
        assert close(inner.fun, res.value, 1e-8)


# ---------------------------------------------------------------- coincidence

PAIRS = [(QUARTIC, OSC_LINE, "line"), (COMBO, COULOMB, "radial"), (COMBO, OSC_RADIAL, "radial")]


@pytest.mark.parametrize("n", range(4))
def test_coincidence_quartic(n):
    env, loc, delta = coincidence_check(QUARTIC, OSC_LINE, line_base(n), 1.0)
    assert delta < 1e-8 and close(env.value, quartic_exact(n), 1e-8)


def test_coincidence_combo_and_fixed_point():
    env, loc, delta = coincidence_check(COMBO, COULOMB, COULOMB_K7, 1.0)
    assert delta < 1e-8 and close(loc.value, COMBO_LOWER, 5e-6)
    _, _, delta = coincidence_check(OSC_RADIAL, OSC_RADIAL, OSC_K7, 1.5)
    assert delta < 1e-12


@given(pair=st.sampled_from(PAIRS), v=st.floats(0.5, 4.0), n=st.integers(0, 2))
def test_coincidence_property(pair, v, n):
    f, h, mode = pair
    qn = QuantumNumbers.line(n) if mode == "line" else QuantumNumbers(n=n, d=3, l=2)
    _, _, delta = coincidence_check(f, h, spectrum_for_shape(h, qn), v)
    assert delta < 1e-8


# ---------------------------------------------------------------- critical_parameter

def test_critical_parameter_examples():
    assert close(critical_parameter(COMBO, COULOMB, K7, 1.0), 1.0, 1e-8)
    assert close(critical_parameter(COMBO, OSC_RADIAL, K7, 1.0), math.sqrt(1.5), 1e-8)


@given(r=st.floats(0.2, 5.0), v=st.floats(0.5, 4.0))
def test_critical_parameter_closed_forms(r, v):
    # t1 = (1 + 2r^3)/3 and t2 = (1 + 1/(2r^3))^(1/2) at v = 1, scaled by the coupling
    t1 = critical_parameter(COMBO, COULOMB, K7, r, v)
    t2 = critical_parameter(COMBO, OSC_RADIAL, K7, r, v)
    assert math.isclose(t1, v * (1 + 2 * r ** 3) / 3, rel_tol=1e-12)
    assert math.isclose(t2, math.sqrt(v * (1 + 1 / (2 * r ** 3))), rel_tol=1e-12)
    for h in (COULOMB, OSC_RADIAL):
        a = critical_parameter(COMBO, h, K7, r, v, "closed")
        b = critical_parameter(COMBO, h, K7, r, v, "numeric")
        assert abs(a - b) < 1e-8 * max(1.0, a)


def test_critical_parameter_without_root():
    # a repulsive slope cannot be balanced by a positive coupling
    with pytest.raises(NoRoot):
        critical_parameter(COMBO, OSC_RADIAL, K7, 0.5, -1.0)
    with pytest.raises(NoRoot):
        critical_parameter(COMBO, OSC_RADIAL, K7, 0.5, -1.0, "numeric")


def test_saddle_consistency():
    res = local_energy_bound(COMBO, COULOMB, COULOMB_K7, 1.0)
    t_star = res.optimizer
    r_star = inner_extremum(_profile(Family.RADIAL_COULOMB, K7, t_star, COMBO), "inf").x
    assert abs(critical_parameter(COMBO, COULOMB, K7, r_star) - t_star) < 1e-6
    # the same r is the tangent contact point of the envelope bound
    env = envelope_bound_tangent(COMBO, COULOMB, COULOMB_K7, 1.0)
    assert abs(env.optimizer - r_star) < 1e-5
