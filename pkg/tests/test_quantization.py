import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from inertonlab.model import ModelParams, ParameterError, derive_quantities
from inertonlab.quantization import (
    WaveSpec,
    action_table,
    cyclic_action,
    de_broglie,
    oscillator_momentum,
    schrodinger_residuals,
    shortened_action,
    shortened_action_closed_form,
    turning_point,
    wavefunction,
)

PI = math.pi
E, M, T = 0.225, 1.25, 1.0


def test_turning_point_and_momentum():
    xm = turning_point(E, M, T)
    assert xm == pytest.approx(0.6 / PI, rel=1e-15)
    assert oscillator_momentum(0.0, E, M, T) == pytest.approx(0.75, rel=1e-15)
    assert oscillator_momentum(xm, E, M, T) == pytest.approx(0.0, abs=1e-7)
    assert oscillator_momentum(2 * xm, E, M, T) == 0.0


def test_shortened_action_examples():
    xm = turning_point(E, M, T)
    assert shortened_action(0.0, E, M, T) == 0.0
    assert shortened_action(xm, E, M, T) == pytest.approx(E * T / 2, rel=1e-9)
    assert shortened_action(xm, E, M, T) == pytest.approx(0.1125, rel=1e-9)
    half = (E * T / PI) * (PI / 6 + math.sqrt(3) / 4)
    assert shortened_action(xm / 2, E, M, T) == pytest.approx(half, rel=1e-9)
    assert shortened_action_closed_form(xm / 2, E, M, T) == pytest.approx(half, rel=1e-14)


def test_shortened_action_against_mpmath():
    mp.mp.dps = 30
    xm = turning_point(E, M, T)
    for frac in ("0.1", "0.37", "0.9", "0.999"):
        X = float(mp.mpf(frac) * xm)
        ref = mp.quad(lambda s: mp.sqrt(2 * M * (E - M * (mp.pi / T) ** 2 * s * s / 2)), [0, X])
        assert shortened_action(X, E, M, T) == pytest.approx(float(ref), rel=1e-12)


def test_shortened_action_fifty_points():
    xm = turning_point(E, M, T)
    X = xm * (np.arange(1, 51) / 51.0)
    quad = np.array([shortened_action(x, E, M, T) for x in X])
    exact = shortened_action_closed_form(X, E, M, T)
    assert np.max(np.abs(quad - exact) / exact) <= 1e-9


def test_hamilton_jacobi_consistency():
    xm = turning_point(E, M, T)
    h = 1e-6 * xm
    for frac in (0.1, 0.4, 0.7, 0.95):
        X = frac * xm
        fd = (shortened_action(X + h, E, M, T) - shortened_action(X - h, E, M, T)) / (2 * h)
        assert fd == pytest.approx(oscillator_momentum(X, E, M, T), abs=1e-6)


def test_shortened_action_domain():
    with pytest.raises(ValueError):
        shortened_action(-0.01, E, M, T)
    with pytest.raises(ValueError):
        shortened_action(1.0, E, M, T)


def test_action_table_monotone():
    tab = action_table(E, M, T, n_points=21)
    assert np.all(np.diff(tab.S1) >= 0)
    assert tab.J == pytest.approx(0.45, rel=1e-10)
    assert tab.X[-1] == tab.X_max


@pytest.mark.parametrize("E_, T_, J", [(0.0, 1.0, 0.0), (0.225, 1.0, 0.45), (1.0, 0.5, 1.0)])
def test_cyclic_action_examples(E_, T_, J):
    assert cyclic_action(E_, 1.25, T_) == pytest.approx(J, rel=1e-10, abs=0)


@given(st.floats(1e-3, 50), st.floats(0.05, 20), st.floats(0.1, 10))
def test_cyclic_action_property(E_, T_, M_):
    assert cyclic_action(E_, M_, T_) == pytest.approx(2 * E_ * T_, rel=1e-10)


def test_de_broglie_examples(canonical):
    db = de_broglie(canonical)
    assert db.wavelength == pytest.approx(0.6, rel=1e-15)
    assert db.wavelength_residual == pytest.approx(0.0, abs=1e-15)
    assert db.nu == pytest.approx(0.5, rel=1e-15)
    assert db.nu_residual == pytest.approx(0.0, abs=1e-15)


def test_de_broglie_wrong_h(canonical):
    db = de_broglie(canonical, h=2 * canonical.h)
    assert db.wavelength_residual == pytest.approx(canonical.lam, rel=1e-14)
    assert db.nu_residual == pytest.approx(-0.25, rel=1e-14)


def test_de_broglie_rest():
    with pytest.raises(ParameterError):
        de_broglie(derive_quantities(ModelParams(v0=0.0)))


@given(st.floats(0.01, 0.99), st.floats(0.1, 10), st.floats(0.1, 10))
def test_de_broglie_identities(beta, M0, T_):
    dq = derive_quantities(ModelParams(M0=M0, v0=beta, T=T_))
    assert abs(dq.h / dq.lam - dq.M * dq.v0) <= 1e-12 * dq.M * dq.v0
    assert abs(dq.E - dq.h * dq.nu) <= 1e-12 * dq.E


def test_wavefunction_examples(canonical):
    w = WaveSpec.from_quantities(canonical, psi0=0.5 + 0.25j)
    assert wavefunction(0.0, 0.0, w) == 0.5 + 0.25j
    assert wavefunction(w.wavelength, 0.0, w) == pytest.approx(0.5 + 0.25j, abs=1e-15)
    assert wavefunction(w.wavelength / 4, 0.0, w) == pytest.approx(1j * (0.5 + 0.25j), abs=1e-15)


@given(st.floats(-100, 100), st.floats(0, 100))
def test_modulus_invariance(X, t):
    w = WaveSpec(psi0=cmath.rect(2.0, 0.3), wavelength=0.6, nu=0.5, h=0.45)
    assert abs(wavefunction(X, t, w)) == pytest.approx(2.0, rel=4e-16)


def test_schrodinger_consistent(canonical):
    w = WaveSpec.from_quantities(canonical)
    X, t = np.meshgrid(np.linspace(0, 3, 41), np.linspace(0, 2, 21))
    r37, r39 = schrodinger_residuals(w, canonical.M, canonical.E, X, t)
    assert r37 <= 1e-13 and r39 <= 1e-13


def test_schrodinger_negative_controls(canonical):
    w = WaveSpec.from_quantities(canonical)
    X, t = np.linspace(0, 3, 41), np.linspace(0, 2, 41)
    bad_lambda = WaveSpec(w.psi0, 1.1 * w.wavelength, w.nu, w.h)
    r37, _ = schrodinger_residuals(bad_lambda, canonical.M, canonical.E, X, t)
    assert r37 == pytest.approx(abs(1 / 1.21 - 1), abs=1e-12)
    assert r37 == pytest.approx(0.1736, abs=1e-3)
    bad_nu = WaveSpec(w.psi0, w.wavelength, 1.2 * w.nu, w.h)
    r37, r39 = schrodinger_residuals(bad_nu, canonical.M, canonical.E, X, t)
    assert r37 <= 1e-13
    assert r39 == pytest.approx(0.2, rel=1e-12)


def test_wavespec_validation():
    for args in ((1.0, 0.0, 1.0, 1.0), (1.0, 1.0, 0.0, 1.0), (0.0, 1.0, 1.0, 1.0), (1.0, 1.0, 1.0, 0.0)):
        with pytest.raises(ValueError):
            WaveSpec(*args)
    w = WaveSpec(1.0, 0.6, 0.5, 0.45)
    assert w.hbar == pytest.approx(0.45 / (2 * PI))
    assert w.wavenumber == pytest.approx(2 * PI / 0.6)


@given(st.floats(1e-4, 0.5), st.floats(0.2, 5.0))
def test_nonrelativistic_limit(beta, T_):
    dq = derive_quantities(ModelParams(v0=beta, T=T_))
    E_rest = dq.M0 * beta ** 2 / 2
    pairs = [
        (dq.E, E_rest),
        (cyclic_action(dq.E, dq.M, T_), 2 * E_rest * T_),
        (dq.h, 2 * E_rest * T_),
        (shortened_action(turning_point(dq.E, dq.M, T_), dq.E, dq.M, T_), E_rest * T_ / 2),
    ]
    for with_M, with_M0 in pairs:
        assert abs(with_M - with_M0) <= beta ** 2 * abs(with_M0) * (1 + 1e-9)
    assert turning_point(dq.E, dq.M, T_) == pytest.approx(turning_point(E_rest, dq.M0, T_), rel=1e-12)
