import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from inertonlab.model import ModelParams, derive_quantities, ensemble_velocities
from inertonlab.quadrature import integrate as quad
from inertonlab.trajectories import (
    TrajectoryDomainError,
    TrajectorySeries,
    cloud_acceleration,
    cloud_position,
    cloud_velocity,
    inerton_period_solution,
    oscillator_amplitude,
    oscillator_position,
    particle_acceleration,
    particle_position,
    particle_velocity,
    period_index,
    sample_trajectory,
    time_grid,
)

PI = math.pi


def test_particle_velocity_examples(canonical):
    assert particle_velocity(0.0, canonical) == 0.6
    assert particle_velocity(0.5, canonical) == 0.0
    assert particle_velocity(0.25, canonical) == pytest.approx(0.6 * (1 - math.sqrt(2) / 2), rel=1e-15)


def test_particle_position_examples(canonical):
    assert particle_position(0.0, canonical) == 0.0
    assert particle_position(0.5, canonical) == pytest.approx(0.3 - 0.6 / PI, rel=1e-15)
    assert particle_position(0.5, canonical) == pytest.approx(0.109014, abs=1e-6)
    for branch in (0, 1):
        assert particle_position(1.0, canonical, branch=branch) == pytest.approx(0.6 - 1.2 / PI, rel=1e-14)


def test_cloud_examples(canonical):
    assert cloud_position(0.0, canonical) == 0.0
    assert cloud_velocity(0.0, canonical) == 1.0
    assert cloud_position(0.5, canonical) == pytest.approx(1 / PI, rel=1e-15)
    assert cloud_velocity(0.5, canonical) == pytest.approx(0.0, abs=1e-16)
    assert cloud_velocity(1.0, canonical, side="left") == -1.0
    assert cloud_velocity(1.0, canonical, side="right") == 1.0
    assert cloud_velocity(1.0 - 1e-12, canonical) == pytest.approx(-1.0)


def test_cloud_velocity_bad_side(canonical):
    with pytest.raises(ValueError):
        cloud_velocity(0.3, canonical, side="up")


def test_negative_time_rejected(canonical):
    for fn in (particle_velocity, particle_position, cloud_position, cloud_velocity):
        with pytest.raises(TrajectoryDomainError):
            fn(-0.1, canonical)


def test_period_index_snaps_near_integers():
    n, f = period_index(np.array([3 * 0.1 / 0.1, 0.7 * 10 / 7, 2.5]), 1.0)
    assert list(n) == [3.0, 1.0, 2.0]
    assert list(f) == [0.0, 0.0, 0.5]


def test_velocity_returns_to_v0_exactly(canonical):
    for n in range(21):
        assert particle_velocity(n * canonical.T, canonical) == canonical.v0


def test_continuity_at_period_boundaries(canonical):
    for n in range(1, 21):
        t = float(n)
        left = particle_position(t, canonical, branch=n - 1)
        right = particle_position(t, canonical, branch=n)
        assert abs(left - right) <= 1e-12 * abs(right)
        assert abs(cloud_position(t, canonical)) <= 1e-12 * canonical.Lam


def test_mean_drift_matches_quadrature(canonical):
    v0 = canonical.v0
    for n in range(1, 11):
        t = 2.0 * n
        drift = (particle_position(t, canonical) - 0.0) / t
        assert drift == pytest.approx(v0 * (1 - 2 / PI), rel=1e-10)
        # independent route: integrate the speed over [0, 2nT] one half-period at a time
        integral = sum(quad(lambda s: v0 * (1 - np.sin(PI * (s - k))), k, k + 1.0)[0] for k in range(2 * n))
        assert integral / t == pytest.approx(drift, rel=1e-12)


def test_range_bounds_random(canonical):
    rng = np.random.default_rng(11)
    t = rng.uniform(0.0, 20.0, 10_000)
    Xd = particle_velocity(t, canonical)
    x = cloud_position(t, canonical)
    xd = cloud_velocity(t, canonical)
    assert np.all((Xd >= 0) & (Xd <= canonical.v0))
    assert np.all((x >= 0) & (x <= canonical.Lam / PI))
    assert np.all(np.abs(xd) <= canonical.c)


def test_position_monotone(canonical):
    X = particle_position(np.linspace(0.0, 10.0, 1001), canonical)
    assert np.all(np.diff(X) >= 0)


def test_finite_difference_consistency(canonical):
    h = 1e-4
    rng = np.random.default_rng(5)
    t = rng.uniform(0.0, 10.0, 400)
    f = t - np.floor(t)
    t = t[(np.abs(f - 0.5) > 1e-2) & (f > 1e-2) & (f < 1 - 1e-2)]
    fd = (particle_position(t + h, canonical) - particle_position(t - h, canonical)) / (2 * h)
    assert np.max(np.abs(fd - particle_velocity(t, canonical))) <= 1e-6
    fd = (particle_velocity(t + h, canonical) - particle_velocity(t - h, canonical)) / (2 * h)
    assert np.max(np.abs(fd - particle_acceleration(t, canonical))) <= 1e-6
    fd = (cloud_position(t + h, canonical) - cloud_position(t - h, canonical)) / (2 * h)
    assert np.max(np.abs(fd - cloud_velocity(t, canonical))) <= 1e-6
    fd = (cloud_velocity(t + h, canonical) - cloud_velocity(t - h, canonical)) / (2 * h)
    assert np.max(np.abs(fd - cloud_acceleration(t, canonical))) <= 1e-6


def test_rest_case_is_constant():
    dq = derive_quantities(ModelParams(v0=0.0))
    t = np.linspace(0, 5, 51)
    assert np.all(particle_position(t, dq) == 0)
    assert np.all(particle_velocity(t, dq) == 0)
    assert np.all(cloud_position(t, dq) == 0)
    assert np.all(cloud_velocity(t, dq) == dq.c)
    assert np.all(cloud_acceleration(t, dq) == 0)


def test_oscillator_examples():
    assert np.all(oscillator_position(np.linspace(0, 3, 7), 0.0, 1.25, 1.0) == 0)
    assert oscillator_position(0.5, 0.225, 1.25, 1.0) == pytest.approx(0.6 / PI, rel=1e-15)
    assert oscillator_position(0.5, 0.225, 1.25, 1.0) == pytest.approx(0.190986, abs=1e-6)
    assert oscillator_position(1.0, 0.225, 1.25, 1.0) == pytest.approx(0.0, abs=1e-16)


def test_oscillator_rejects_bad_inputs():
    with pytest.raises(ValueError):
        oscillator_position(0.1, -1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        oscillator_position(0.1, 1.0, 0.0, 1.0)


def test_inerton_examples():
    ens = ensemble_velocities(ModelParams(N=4))
    s = inerton_period_solution(0, 0.0, ens)
    assert (s.xdot_perp, s.x_perp, s.Xdot_r, s.X_r) == (1.0, 0.0, 0.6, 0.0)
    s = inerton_period_solution(0, 0.5, ens)
    assert s.Xdot_r == 0.0
    assert s.x_perp == pytest.approx(1 / PI, rel=1e-15)
    assert s.X_r == pytest.approx(0.3 - 0.6 / PI, rel=1e-14)
    # 3 v0r / (2 pi) with v0r = 0.6 is 1.8 / (2 pi)
    assert s.xdot_par == pytest.approx(1.8 / (2 * PI), rel=1e-15)
    assert s.xdot_par == pytest.approx(0.286479, abs=1e-6)
    for r in range(4):
        assert inerton_period_solution(r, 0.3, ens).xdot_par == 3 * ens.v0r[r] / (2 * PI)


def test_inerton_single_period_only():
    ens = ensemble_velocities(ModelParams(N=2))
    with pytest.raises(TrajectoryDomainError):
        inerton_period_solution(0, 1.5, ens)
    with pytest.raises(IndexError):
        inerton_period_solution(2, 0.1, ens)


def test_inerton_derivative_consistency():
    ens = ensemble_velocities(ModelParams(N=4))
    h = 1e-5
    for r in range(4):
        for tr in (0.1, 0.3, 0.7, 0.9):
            fd = (inerton_period_solution(r, tr + h, ens).X_r - inerton_period_solution(r, tr - h, ens).X_r) / (2 * h)
            assert fd == pytest.approx(inerton_period_solution(r, tr, ens).Xdot_r, abs=1e-6)
            fd = (inerton_period_solution(r, tr + h, ens).x_perp - inerton_period_solution(r, tr - h, ens).x_perp) / (2 * h)
            assert fd == pytest.approx(inerton_period_solution(r, tr, ens).xdot_perp, abs=1e-6)


def test_sample_trajectory_examples(canonical):
    one = sample_trajectory([0.0], canonical)
    assert one.state(0) == (0.0, 0.0, 0.6, 0.0, 1.0)
    three = sample_trajectory([0.0, 0.5, 1.0], canonical)
    assert three.X == pytest.approx([0.0, 0.109014, 0.218028], abs=1e-6)
    grid = time_grid(10, 100, 1.0)
    big = sample_trajectory(grid, canonical)
    assert len(big) == 1001
    assert np.all(np.diff(big.X) >= 0)
    assert big.meta["t0"] == 0.0 and big.meta["t_end"] == 10.0


def test_time_grid():
    g = time_grid(10, 1000, 1.0)
    assert g.size == 10001 and g[0] == 0.0 and g[-1] == 10.0
    with pytest.raises(ValueError):
        time_grid(1, 0, 1.0)


def test_series_validation():
    with pytest.raises(ValueError):
        TrajectorySeries(t=[], X=[], Xdot=[], x=[], xdot=[])
    with pytest.raises(ValueError):
        TrajectorySeries(t=[0, 0], X=[0, 0], Xdot=[0, 0], x=[0, 0], xdot=[0, 0])
    with pytest.raises(ValueError):
        TrajectorySeries(t=[0, 1], X=[0], Xdot=[0, 0], x=[0, 0], xdot=[0, 0])


def test_high_precision_spot_values(canonical):
    mp.mp.dps = 30
    for t in ("0.37", "3.81", "7.125"):
        tm = mp.mpf(t)
        n = mp.floor(tm)
        X = mp.mpf("0.6") * tm + mp.mpf("0.6") / mp.pi * ((-1) ** int(n) * mp.cos(mp.pi * tm) - (1 + 2 * n))
        assert particle_position(float(t), canonical) == pytest.approx(float(X), rel=1e-14)
        x = 1 / mp.pi * abs(mp.sin(mp.pi * tm))
        assert cloud_position(float(t), canonical) == pytest.approx(float(x), rel=1e-14)


@given(st.floats(0.0, 50.0), st.floats(0.01, 0.99), st.floats(0.2, 5.0))
def test_bounds_property(t, beta, T):
    dq = derive_quantities(ModelParams(v0=beta, T=T))
    assert 0.0 <= particle_velocity(t, dq) <= dq.v0
    assert 0.0 <= cloud_position(t, dq) <= dq.Lam / PI * (1 + 1e-15)
    assert abs(cloud_velocity(t, dq)) <= dq.c
    assert particle_position(t, dq) >= -1e-15 * dq.lam


@given(st.integers(1, 40), st.floats(0.01, 0.99), st.floats(0.2, 5.0))
def test_period_boundary_property(n, beta, T):
    dq = derive_quantities(ModelParams(v0=beta, T=T))
    t = n * T
    assert particle_velocity(t, dq) == dq.v0
    left = particle_position(t, dq, branch=n - 1)
    right = particle_position(t, dq, branch=n)
    assert abs(left - right) <= 1e-12 * max(abs(right), dq.lam)


def test_oscillator_amplitude_matches_lambda_over_pi(canonical):
    assert oscillator_amplitude(canonical.E, canonical.M, canonical.T) == pytest.approx(canonical.lam / PI, rel=1e-12)
