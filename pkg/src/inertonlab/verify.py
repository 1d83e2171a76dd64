"""The full invariant suite behind the ``verify`` scenario.

Each ``check_*`` function builds one :class:`~inertonlab.report.Check`; the
two documented discrepancies are collected separately and never affect the
overall status.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import replace

import numpy as np

from . import dynamics, mechanics, model, quantization, trajectories
from .config import RunConfig
from .report import Check, Discrepancy, VerificationReport, csv_text

RANDOM_SEED = 20240611


def _dq(cfg: RunConfig):
    return model.derive_quantities(cfg.params)


def _canonical_run(cfg: RunConfig, step=None, t_end=None, t_eval=None, event_mode=None):
    dq = _dq(cfg)
    icfg = cfg.integrator
    if step is not None or event_mode is not None:
        icfg = replace(
            icfg,
            step=icfg.step if step is None else step,
            event_mode=icfg.event_mode if event_mode is None else event_mode,
        )
    t_end = cfg.t_end if t_end is None else t_end
    return dynamics.integrate(dynamics.canonical_initial_state(dq), (0.0, t_end * dq.T), dq, icfg, t_eval=t_eval)


def check_ode_vs_closed_form(cfg):
    dq = _dq(cfg)
    series = _canonical_run(cfg)
    err = dynamics.oracle_errors(series, dq).max(axis=0)
    chk = Check("C01", f"numerical run vs closed-form trajectory over [0, {cfg.t_end:g} T]")
    relation = "numerical state vs closed-form particle and cloud trajectories"
    for name, e in zip(("X", "Xdot", "x", "xdot"), err):
        chk.add(f"max|{name}_num - {name}_exact|", relation, e, 1e-7)
    return chk


def interior_times(periods=4, n=1000, T=1.0):
    """``n`` times spread over ``periods`` periods, clear of ``kT/2``."""
    return (np.arange(n) + 0.5) * (periods * T / n)


def check_closed_form_residuals(cfg):
    dq = _dq(cfg)
    t = interior_times(T=dq.T)
    r1, r2 = dynamics.analytic_residual(t, dq)
    chk = Check("C02", "closed-form solution substituted into the equations of motion (1000 interior points, 4 periods)")
    chk.add("particle equation", "Xddot + (pi/T)(v0/c) xdot = 0", np.max(np.abs(r1)), 1e-12)
    chk.add("cloud equation", "xddot - (pi/T)(c/v0)(Xdot - v0) = 0", np.max(np.abs(r2)), 1e-12)
    states = np.column_stack([
        trajectories.particle_position(t, dq),
        trajectories.particle_velocity(t, dq),
        trajectories.cloud_position(t, dq),
        trajectories.cloud_velocity(t, dq),
    ])
    rhs = np.array([dynamics.derivatives(s, dq) for s in states])
    exact = np.column_stack([
        states[:, 1],
        trajectories.particle_acceleration(t, dq),
        states[:, 3],
        trajectories.cloud_acceleration(t, dq),
    ])
    chk.add("right-hand side vs closed-form derivatives", "f(state) = d(state)/dt", np.max(np.abs(rhs - exact)), 1e-12)
    return chk


def convergence_ratio(cfg, t_end=None):
    dq = _dq(cfg)
    h = cfg.integrator.step_for(dq.T)
    t_end = cfg.t_end if t_end is None else t_end
    grid = trajectories.time_grid(t_end, 100, dq.T)
    errors = []
    for step in (2.0 * h, h):
        series = _canonical_run(cfg, step=step, t_end=t_end, t_eval=grid)
        errors.append(dynamics.oracle_errors(series, dq).max())
    return errors[0] / errors[1], errors


def check_convergence(cfg):
    ratio, (e_coarse, e_fine) = convergence_ratio(cfg)
    chk = Check("C03", "fourth-order convergence of the fixed-step integrator")
    chk.add(
        "error ratio step 2h vs h",
        "max error(2h) / max error(h) = 16",
        abs(ratio - 16.0),
        4.0,
        notes=f"ratio={ratio:.4f}, errors {e_coarse:.3e} / {e_fine:.3e}",
    )
    return chk


def check_action(cfg):
    dq = _dq(cfg)
    E, M, T = dq.E, dq.M, dq.T
    chk = Check("C04", "cyclic and shortened action")
    J = quantization.cyclic_action(E, M, T)
    chk.add("cyclic action", "loop integral of p dX over 2T = 2 E T", abs(J - 2.0 * E * T) / (2.0 * E * T), 1e-10,
            notes=f"J={J!r}")
    x_max = quantization.turning_point(E, M, T)
    X = np.linspace(x_max / 50, x_max, 50)
    quad = np.array([quantization.shortened_action(x, E, M, T) for x in X])
    exact = quantization.shortened_action_closed_form(X, E, M, T)
    chk.add("shortened action, 50 points", "quadrature vs (E T/pi)[arcsin u + u sqrt(1-u^2)]",
            np.max(np.abs(quad - exact) / exact), 1e-9)
    return chk


def random_parameter_sets(n=20, seed=RANDOM_SEED):
    rng = np.random.default_rng(seed)
    sets = []
    for _ in range(n):
        c = rng.uniform(0.5, 3.0)
        sets.append(model.ModelParams(
            M0=rng.uniform(0.1, 10.0),
            v0=rng.uniform(0.01, 0.99) * c,
            c=c,
            T=rng.uniform(0.1, 10.0),
            N=int(rng.integers(1, 9)),
        ))
    return sets


def check_de_broglie(cfg):
    wl, en = [], []
    for p in random_parameter_sets():
        dq = model.derive_quantities(p)
        db = quantization.de_broglie(dq)
        wl.append(abs(dq.h / dq.lam - dq.M * dq.v0) / (dq.M * dq.v0))
        en.append(abs(dq.E - dq.h * db.nu) / dq.E)
        en.append(abs(dq.E - dq.h * dq.nu) / dq.E)
        wl.append(abs(db.wavelength - dq.lam) / dq.lam)
    chk = Check("C05", "de Broglie relations under the derived-h closure (20 random parameter sets)")
    chk.add("wavelength", "h / lambda = M v0", max(wl), 1e-12)
    chk.add("frequency", "E = h nu", max(en), 1e-12)
    return chk


def check_schrodinger(cfg):
    dq = _dq(cfg)
    w = quantization.WaveSpec.from_quantities(dq)
    X, t = np.meshgrid(np.linspace(0.0, 5.0 * dq.lam, 41), np.linspace(0.0, 5.0 * dq.T, 41))
    r37, r39 = quantization.schrodinger_residuals(w, dq.M, dq.E, X, t)
    chk = Check("C06", "plane wave in the stationary and time-dependent wave equations")
    chk.add("stationary equation", "(hbar^2/2M) psi'' + E psi = 0", r37, 1e-13)
    chk.add("time-dependent equation", "i hbar dpsi/dt + (hbar^2/2M) psi'' = 0", r39, 1e-13)
    bad = quantization.WaveSpec(psi0=w.psi0, wavelength=1.1 * w.wavelength, nu=w.nu, h=w.h)
    r_bad, _ = quantization.schrodinger_residuals(bad, dq.M, dq.E, X, t)
    chk.add("negative control: wavelength x1.1", "residual detected at |1 - 1/1.21|",
            abs(r_bad - 0.1736), 1e-3, notes=f"measured {r_bad:.6f}")
    return chk


def check_relativistic(cfg):
    c, M0 = cfg.params.c, cfg.params.M0
    grid = np.linspace(0.0, 0.999 * c, 100)
    M = model.relativistic_mass(M0, grid, c)
    mass_res = np.max(np.abs(M * np.sqrt(1.0 - (grid / c) ** 2) - M0) / M0)
    scale_res = np.max(np.abs(model.mass_volume_scaling(grid, c) * M0 - M) / M)
    rho0 = 1.0
    rho = model.density_transform(rho0, grid, c)
    dens_res = np.max(np.abs(rho / rho0 - (M / M0) ** 2) / (M / M0) ** 2)
    T = 1.0
    hydro = max(
        abs(model.hydrodynamic_residual(rho0, v, c, v * T, T, stage=stage))
        for v in grid for stage in (1, 2)
    )
    chk = Check("C07", "relativistic mass, density and discrete hydrodynamics (100 speeds up to 0.999 c)")
    chk.add("mass", "M sqrt(1 - v0^2/c^2) = M0", mass_res, 1e-12)
    chk.add("volume scaling", "scale(v0) M0 = M", scale_res, 1e-12)
    chk.add("density", "rho / rho0 = (M / M0)^2", dens_res, 1e-12)
    chk.add("hydrodynamic balance", "rho dv/dt = -c^2 drho/dl, both half-stages", hydro, 1e-12)
    return chk


def check_trajectory_structure(cfg):
    dq = _dq(cfg)
    n = np.arange(1, 21)
    t = n * dq.T
    left = trajectories.particle_position(t, dq, branch=n - 1)
    right = trajectories.particle_position(t, dq, branch=n)
    gap = np.max(np.abs(left - right) / np.abs(right))
    speed = np.max(np.abs(trajectories.particle_velocity(np.concatenate([[0.0], t]), dq) - dq.v0))
    x_at = np.max(np.abs(trajectories.cloud_position(t, dq))) / dq.Lam
    m = np.arange(1, 11)
    drift = trajectories.particle_position(2 * m * dq.T, dq) / (2 * m * dq.T)
    drift_err = np.max(np.abs(drift - dq.v0 * (1.0 - 2.0 / math.pi)))
    chk = Check("C08", "structure of the closed-form trajectory")
    chk.add("continuity of X at nT", "left and right branches agree", gap, 1e-12)
    chk.add("speed restored at nT", "Xdot(nT) = v0 exactly", speed, 0.0, passed=speed == 0.0)
    chk.add("cloud returns at nT", "x(nT) = 0 (relative to Lambda)", x_at, 1e-12)
    chk.add("mean drift", "X(2nT) / 2nT = v0 (1 - 2/pi)", drift_err, 1e-10)
    return chk


def check_energy(cfg):
    dq = _dq(cfg)
    grid = np.linspace(0.0, 2.0 * dq.T, 1000)
    dev = mechanics.heff_conservation(dq.E, dq.M, dq.T, grid)
    amp = trajectories.oscillator_amplitude(dq.E, dq.M, dq.T)
    chk = Check("C09", "effective Hamiltonian along the bounded oscillator solution")
    chk.add("Heff conservation", "Heff(t) = E", dev / dq.E, 1e-10)
    chk.add("amplitude", "sqrt(2E/M) T/pi = lambda/pi", abs(amp - dq.lam / math.pi) / (dq.lam / math.pi), 1e-12)
    return chk


def check_ensemble(cfg):
    ens = model.ensemble_velocities(cfg.params, cfg.T_r)
    v = ens.v0r
    chk = Check("C10", "inerton ensemble speeds and per-inerton integration")
    chk.add("monotone speeds", "v0r[r+1] <= v0r[r]", max(0.0, float(np.max(np.diff(v)))) if v.size > 1 else 0.0, 0.0,
            passed=bool(np.all(np.diff(v) <= 0)))
    chk.add("first speed", "v0r[0] = v0 exactly", abs(v[0] - cfg.params.v0), 0.0, passed=v[0] == cfg.params.v0)
    for r in range(len(ens)):
        if ens.v0r[r] == 0:
            continue
        series = dynamics.integrate_inerton(r, ens, cfg.integrator)
        exact = np.array([
            (s.X_r, s.Xdot_r, s.x_perp, s.xdot_perp)
            for s in (trajectories.inerton_period_solution(r, min(tk, float(ens.T_r[r])), ens) for tk in series.t)
        ])
        chk.add(f"inerton r={r}", "numerical single period vs closed-form inerton solution",
                np.max(np.abs(series.as_array() - exact)), 1e-7)
    return chk


def _with_diagnostics(series, dq):
    return mechanics.attach_diagnostics(series, dq)


def check_determinism(cfg):
    dq = _dq(cfg)
    grid = trajectories.time_grid(cfg.t_end, cfg.samples_per_period, dq.T)
    digests = {}
    for label, make in (
        ("analytic", lambda: trajectories.sample_trajectory(grid, dq)),
        ("integrate", lambda: _canonical_run(cfg, t_eval=grid)),
    ):
        texts = [csv_text(_with_diagnostics(make(), dq)) for _ in range(2)]
        digests[label] = [hashlib.sha256(t.encode()).hexdigest() for t in texts]
    chk = Check("C12", "deterministic output")
    for label, (a, b) in digests.items():
        chk.add(f"{label} CSV rendered twice", "byte-identical", 0.0 if a == b else 1.0, 0.0, passed=a == b,
                notes=f"sha256 {a[:16]}")
    return chk


def check_invariants(cfg):
    dq = _dq(cfg)
    series = _canonical_run(cfg)
    inv = dynamics.velocity_invariant(series, dq.v0, dq.c)
    detected = _canonical_run(cfg, event_mode="detected")
    scheduled = _canonical_run(cfg, event_mode="scheduled")
    ev_d, ev_s = np.array(detected.meta["events"]), np.array(scheduled.meta["events"])
    ev_gap = np.max(np.abs(ev_d - ev_s)) / dq.T if ev_d.shape == ev_s.shape and ev_s.size else math.inf
    chk = Check("I01", "further invariants of the numerical run and the mechanics")
    chk.add("velocity circle", "(Xdot - v0)^2/v0^2 + xdot^2/c^2 = 1", np.max(np.abs(inv - 1.0)), 1e-9)
    chk.add("event times", "detected vs scheduled reflections (relative to T)", ev_gap, 1e-9)
    X, Xd, x, xd = series.X, series.Xdot, series.x, series.xdot
    H = mechanics.hamiltonians(X, Xd, x, xd, dq)
    floor = (dq.M0 * dq.c) ** 2 / dq.M
    chk.add("momentum-form lower bound", "H27 >= (M0 c)^2 / M", max(0.0, float(np.max(floor - H.H27))), 0.0,
            passed=bool(np.all(H.H27 >= floor)))
    L, radical = mechanics.lagrangian_17(0.0, dq.v0, 0.0, 0.0, dq)
    L2 = mechanics.classical_lagrangian(dq.M0, dq.v0, dq.c)
    chk.add("classical reduction", "L with the cloud terms removed = -M0 c^2 sqrt(1 - v0^2/c^2)",
            abs(L - L2) / abs(L2), 1e-12)
    return chk


def radical_discrepancy(cfg):
    dq = _dq(cfg)
    t = np.linspace(0.0, dq.T, 9)
    t[-1] = np.nextafter(dq.T, 0.0)
    X = trajectories.particle_position(t, dq)
    Xd = trajectories.particle_velocity(t, dq)
    x = trajectories.cloud_position(t, dq)
    xd = trajectories.cloud_velocity(t, dq)
    _, radical = mechanics.lagrangian_17(X, Xd, x, xd, dq)
    b2 = (dq.v0 / dq.c) ** 2
    return Discrepancy(
        id="C11a",
        title="radical of the particle/cloud Lagrangian is not constant along the closed-form solution",
        relation="radical = 1 - [M0 Xdot^2 + m0 xdot^2 - (2 pi/T) sqrt(m0 M0)(X xdot + v0 x)] / (M0 c^2)",
        summary={
            "radical(t=0)": float(radical[0]),
            "expected 1 - 2 v0^2/c^2": 1.0 - 2.0 * b2,
            "radical(t=T/2)": float(radical[4]),
            "expected 1 + 2 v0^2/c^2": 1.0 + 2.0 * b2,
            "claimed constant value 1 - v0^2/c^2": 1.0 - b2,
        },
        profile_header=("t", "radical"),
        profile=[(float(a), float(b)) for a, b in zip(t, radical)],
        notes="substituting the printed solutions gives a time-dependent radical",
    )


def hamiltonian_discrepancy(cfg):
    dq = _dq(cfg)
    t = np.linspace(0.0, dq.T, 9)
    t[-1] = np.nextafter(dq.T, 0.0)
    X = trajectories.particle_position(t, dq)
    Xd = trajectories.particle_velocity(t, dq)
    x = trajectories.cloud_position(t, dq)
    xd = trajectories.cloud_velocity(t, dq)
    H = mechanics.hamiltonians(X, Xd, x, xd, dq)
    diff = H.H24 - H.H27
    return Discrepancy(
        id="C11b",
        title="coordinate-form and momentum-form Hamiltonians differ numerically",
        relation="H24 = M (pi/T)^2 X^2 + M c^2 + pi sqrt(m M0) v0 x / T  vs  H27 = p^2/M + p~^2/m + (M0 c)^2/M",
        summary={
            "H24(t=0)": float(H.H24[0]),
            "H27(t=0)": float(H.H27[0]),
            "max |H24 - H27|": float(np.max(np.abs(diff))),
        },
        profile_header=("t", "H24", "H27", "H28", "H24 - H27"),
        profile=[tuple(float(v) for v in row) for row in zip(t, H.H24, H.H27, H.H28, diff)],
        notes="both forms evaluated as written; no equivalence asserted",
    )


CHECKS = (
    check_ode_vs_closed_form,
    check_closed_form_residuals,
    check_convergence,
    check_action,
    check_de_broglie,
    check_schrodinger,
    check_relativistic,
    check_trajectory_structure,
    check_energy,
    check_ensemble,
    check_determinism,
    check_invariants,
)


def config_summary(cfg: RunConfig) -> dict:
    p, i = cfg.params, cfg.integrator
    return {
        "M0": p.M0, "v0": p.v0, "c": p.c, "T": p.T, "N": p.N, "h_mode": p.h_mode, "h": p.h,
        "method": i.method, "step": i.step, "event_mode": i.event_mode,
        "t_end": cfg.t_end, "samples_per_period": cfg.samples_per_period,
    }


def run_verification(cfg: RunConfig, checks=CHECKS) -> VerificationReport:
    rep = VerificationReport(config=config_summary(cfg))
    for fn in checks:
        rep.checks.append(fn(cfg))
    rep.discrepancies.extend([radical_discrepancy(cfg), hamiltonian_discrepancy(cfg)])
    return rep
