"""Numerical integration of the coupled particle/cloud equations of motion.

State vector ``(X, Xdot, x, xdot)``::

    X''  = -(pi/T) (v0/c) x'
    x''  =  (pi/T) (c/v0) (X' - v0)

The particle speed must come back to ``v0`` at every multiple of ``T``.  That
is enforced by a reflection event ``xdot -> -xdot`` when the cloud returns to
the particle (``x = 0`` with ``xdot < 0``).  Events are either scheduled at
exact multiples of ``T`` or located by root finding on ``x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal, NamedTuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .model import DerivedQuantities, EnsembleVelocities
from .trajectories import (
    TrajectorySeries,
    cloud_acceleration,
    cloud_velocity,
    particle_acceleration,
    particle_velocity,
    period_index,
)

MAX_PERIODS = 1000


class IntegrationError(RuntimeError):
    """Integration failed; ``t_last`` is the last time with a valid state."""

    def __init__(self, message, t_last):
        super().__init__(f"{message} (last good t = {t_last!r})")
        self.t_last = t_last


class DegenerateSystemError(ValueError):
    """The cloud equation divides by the emission speed, which is zero here."""


class OdeState(NamedTuple):
    X: float
    Xdot: float
    x: float
    xdot: float


@dataclass(frozen=True)
class IntegratorConfig:
    """Integrator settings.

    ``step`` is an absolute time step; ``None`` means ``T/1000`` of whatever
    system is integrated.  ``event_tol`` bounds the mismatch of ``Xdot - v0``
    (relative to ``v0``) and ``x`` (relative to the cloud period) accepted at
    an event.  ``monitor_tol`` is the slack allowed on the sign and speed
    constraints before a run is declared invalid.
    """

    step: float | None = None
    method: Literal["rk4", "adaptive"] = "rk4"
    rtol: float = 1e-11
    atol: float = 1e-13
    event_mode: Literal["scheduled", "detected"] = "scheduled"
    event_tol: float = 1e-6
    monitor_tol: float = 1e-8

    def __post_init__(self):
        if self.step is not None and not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step!r}")
        if not (self.rtol > 0 and self.atol > 0 and self.event_tol > 0 and self.monitor_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.method not in ("rk4", "adaptive"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.event_mode not in ("scheduled", "detected"):
            raise ValueError(f"unknown event_mode {self.event_mode!r}")

    def step_for(self, T):
        return T / 1000.0 if self.step is None else self.step


@dataclass(frozen=True)
class _System:
    v0: float
    c: float
    T: float

    @property
    def Lam(self):
        return self.c * self.T

    def rhs(self, y):
        w = math.pi / self.T
        return (
            y[1],
            -w * (self.v0 / self.c) * y[3],
            y[3],
            w * (self.c / self.v0) * (y[1] - self.v0),
        )


def derivatives(s, dq: DerivedQuantities) -> OdeState:
    """Time derivative of ``(X, Xdot, x, xdot)``.  Independent of ``X`` and ``x``."""
    if dq.v0 == 0:
        raise DegenerateSystemError("v0 = 0: the cloud equation is singular; use the rest state")
    return OdeState(*_System(dq.v0, dq.c, dq.T).rhs(tuple(s)))


def reflect(s):
    """Reflection map applied when the cloud meets the particle: ``xdot -> -xdot``."""
    X, Xdot, x, xdot = s
    return type(s)(X, Xdot, x, -xdot) if isinstance(s, OdeState) else (X, Xdot, x, -xdot)


def _rk4_step(system, y, h):
    k1 = system.rhs(y)
    k2 = system.rhs(tuple(a + 0.5 * h * b for a, b in zip(y, k1)))
    k3 = system.rhs(tuple(a + 0.5 * h * b for a, b in zip(y, k2)))
    k4 = system.rhs(tuple(a + h * b for a, b in zip(y, k3)))
    return tuple(
        a + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)
    )


class _Run:
    """Bookkeeping shared by the fixed-step and adaptive drivers."""

    def __init__(self, system, cfg, t_eval):
        self.system = system
        self.cfg = cfg
        self.t_eval = t_eval
        self.samples = []
        self.events = []
        self.discrepancies = []
        self.t_last = float(t_eval[0])

    def check(self, t, y):
        if not all(math.isfinite(v) for v in y):
            raise IntegrationError("non-finite state", self.t_last)
        s, tol = self.system, self.cfg.monitor_tol
        X, Xdot, x, xdot = y
        if (
            X < -tol * max(s.v0 * s.T, 1.0)
            or Xdot < -tol * s.v0
            or x < -tol * s.Lam
            or abs(xdot) > s.c * (1.0 + tol)
        ):
            raise IntegrationError(f"state {y} at t={t!r} violates x, X, Xdot >= 0 or |xdot| <= c", self.t_last)
        self.t_last = t

    def event(self, t, y):
        s = self.system
        d_speed = y[1] - s.v0
        d_x = y[2]
        self.events.append(t)
        self.discrepancies.append((t, d_speed, d_x))
        if abs(d_speed) > self.cfg.event_tol * s.v0 or abs(d_x) > self.cfg.event_tol * s.Lam:
            raise IntegrationError(
                f"event at t={t!r}: Xdot - v0 = {d_speed:.3e}, x = {d_x:.3e} exceed the event tolerance",
                self.t_last,
            )
        return reflect(y)

    def series(self, meta):
        data = np.array(self.samples, dtype=float)
        meta = dict(meta)
        meta["events"] = list(self.events)
        meta["event_discrepancies"] = list(self.discrepancies)
        return TrajectorySeries(
            t=self.t_eval, X=data[:, 0], Xdot=data[:, 1], x=data[:, 2], xdot=data[:, 3], meta=meta
        )


def _merge_nodes(t_eval, event_times, T):
    """Union of output times and event times; near-coincident times are merged."""
    tol = 1e-12 * T
    nodes = []  # (time, is_output, is_event)
    ev = list(event_times)
    j = 0
    for t in t_eval:
        while j < len(ev) and ev[j] < t - tol:
            nodes.append((ev[j], False, True))
            j += 1
        if j < len(ev) and abs(ev[j] - t) <= tol:
            nodes.append((ev[j], True, True))
            j += 1
        else:
            nodes.append((t, True, False))
    return nodes


def _scheduled_events(system, t0, t1, at_end):
    n_first = int(math.floor(t0 / system.T)) + 1
    n_last = int(math.floor(t1 / system.T * (1 + 1e-15)))
    times = [n * system.T for n in range(max(n_first, 1), n_last + 1)]
    if not at_end:
        times = [t for t in times if t < t1 - 1e-12 * system.T]
    return times


# a detected crossing closer than this (in units of T) counts as happening now
_DETECT_TIME_TOL = 1e-10


def _crossing_ahead(system, y):
    """True if the cloud is returning and reaches ``x = 0`` within the detection tolerance."""
    return y[3] < 0 and y[2] <= _DETECT_TIME_TOL * system.T * abs(y[3])


def _drive_rk4(run, y, h_max, event_times):
    system, t_eval = run.system, run.t_eval
    detect = run.cfg.event_mode == "detected"
    nodes = _merge_nodes(t_eval, [] if detect else event_times, system.T)
    t = float(t_eval[0])
    run.samples.append(y)
    for t_node, is_output, is_event in nodes[1:]:
        span = t_node - t
        n_sub = max(1, math.ceil(span / h_max - 1e-9))
        h = span / n_sub
        for k in range(n_sub):
            t_next = t_node if k == n_sub - 1 else t + h
            y_next = _rk4_step(system, y, t_next - t)
            if detect and _crossing_ahead(system, y_next):
                if y_next[2] < -_DETECT_TIME_TOL * system.T * abs(y_next[3]):
                    tau = brentq(
                        lambda s: _rk4_step(system, y, s)[2], 0.0, t_next - t,
                        xtol=1e-15 * system.T, rtol=4 * np.finfo(float).eps,
                    )
                    t_event = t + tau
                    y_event = run.event(t_event, _rk4_step(system, y, tau))
                    y_next = _rk4_step(system, y_event, t_next - t_event)
                else:
                    y_next = run.event(t_next, y_next)
            t, y = t_next, y_next
            run.check(t, y)
        if is_event:
            y = run.event(t, y)
        if is_output:
            run.samples.append(y)
    return y


def _drive_adaptive(run, y, h_max, event_times, t1):
    system, cfg, t_eval = run.system, run.cfg, run.t_eval
    fun = lambda _t, v: system.rhs(v)
    t = float(t_eval[0])
    run.samples.append(y)
    out_idx = 1
    detect = cfg.event_mode == "detected"
    stops = [] if detect else [te for te in event_times if te > t]

    def crossing(_t, v):
        return v[2]

    crossing.terminal = True
    crossing.direction = -1

    while t < t1:
        t_stop = stops[0] if stops else t1
        remaining = t_eval[out_idx:]
        wanted = remaining[remaining <= t_stop + 1e-12 * system.T]
        if wanted.size == 0 or wanted[-1] < t_stop:
            wanted = np.append(wanted, t_stop)
        sol = solve_ivp(
            fun, (t, t_stop), y, method="DOP853", rtol=cfg.rtol, atol=cfg.atol,
            t_eval=wanted, events=crossing if detect else None, max_step=h_max * 100,
        )
        if sol.status == -1:
            raise IntegrationError(f"adaptive integrator failed: {sol.message}", run.t_last)
        hit = detect and sol.status == 1 and len(sol.t_events[0]) > 0
        if hit:
            t_end = float(sol.t_events[0][0])
            y_end = tuple(sol.y_events[0][0])
        else:
            t_end = float(sol.t[-1])
            y_end = tuple(sol.y[:, -1])
        for tk, yk in zip(sol.t, sol.y.T):
            if out_idx < len(t_eval) and abs(tk - t_eval[out_idx]) <= 1e-12 * system.T:
                run.check(float(tk), tuple(yk))
                run.samples.append(tuple(yk))
                out_idx += 1
        run.check(t_end, y_end)
        if detect and not hit and _crossing_ahead(system, y_end):
            hit = True
        at_event = hit or (not detect and stops and t_stop == stops[0])
        if at_event:
            y_end = run.event(t_end, y_end)
            if not detect:
                stops.pop(0)
            if run.samples and abs(t_eval[out_idx - 1] - t_end) <= 1e-9 * system.T:
                run.samples[-1] = y_end
        t, y = t_end, y_end
        if hit and t >= t1 - 1e-12 * system.T:
            break
    return y


def _integrate(system, s0, t_span, cfg, t_eval, reflect_at_end):
    t0, t1 = map(float, t_span)
    if not (0 <= t0 < t1):
        raise ValueError(f"t_span must satisfy 0 <= t0 < t1, got {t_span!r}")
    if t1 > MAX_PERIODS * system.T * (1 + 1e-12):
        raise ValueError(f"t_span exceeds {MAX_PERIODS} periods")
    h_max = cfg.step_for(system.T)
    if t_eval is None:
        n = max(1, int(round((t1 - t0) / h_max)))
        t_eval = t0 + np.arange(n + 1) * ((t1 - t0) / n)
        t_eval[-1] = t1
    t_eval = np.asarray(t_eval, dtype=float)
    if t_eval[0] != t0 or abs(t_eval[-1] - t1) > 1e-12 * system.T or np.any(np.diff(t_eval) <= 0):
        raise ValueError("t_eval must be strictly increasing from t0 to t1")
    meta = {
        "method": cfg.method,
        "step": h_max,
        "event_mode": cfg.event_mode,
        "v0": system.v0,
        "c": system.c,
        "T": system.T,
    }
    run = _Run(system, cfg, t_eval)
    y0 = tuple(float(v) for v in s0)
    run.check(t0, y0)
    event_times = _scheduled_events(system, t0, t1, reflect_at_end)
    if cfg.method == "rk4":
        _drive_rk4(run, y0, h_max, event_times)
    else:
        _drive_adaptive(run, y0, h_max, event_times, t1)
    return run.series(meta)


def rest_series(s0, t_eval):
    t_eval = np.asarray(t_eval, dtype=float)
    const = np.broadcast_to(np.asarray(tuple(s0), dtype=float), (t_eval.size, 4))
    return TrajectorySeries(
        t=t_eval, X=const[:, 0], Xdot=const[:, 1], x=const[:, 2], xdot=const[:, 3],
        meta={"method": "rest", "events": [], "event_discrepancies": []},
    )


def integrate(s0, t_span, dq: DerivedQuantities, cfg: IntegratorConfig = IntegratorConfig(), t_eval=None) -> TrajectorySeries:
    """Integrate from ``s0`` over ``t_span`` with reflections at every ``nT``.

    Samples are returned at ``t_eval`` (default: every step).  A sample that
    falls on an event time holds the post-reflection state, matching the
    right-continuous closed form of the cloud velocity.

    With ``v0 = 0`` nothing moves and the initial state is returned at every
    sample time.
    """
    if dq.v0 == 0:
        if t_eval is None:
            h = cfg.step_for(dq.T)
            n = max(1, int(round((t_span[1] - t_span[0]) / h)))
            t_eval = np.linspace(t_span[0], t_span[1], n + 1)
        return rest_series(s0, t_eval)
    return _integrate(_System(dq.v0, dq.c, dq.T), s0, t_span, cfg, t_eval, reflect_at_end=True)


def canonical_initial_state(dq: DerivedQuantities) -> OdeState:
    return OdeState(0.0, dq.v0, 0.0, dq.c)


def integrate_inerton(r: int, ens: EnsembleVelocities, cfg: IntegratorConfig = IntegratorConfig(), t_eval=None) -> TrajectorySeries:
    """One period ``[0, T_r]`` of the particle exchanging the ``r``-th inerton.

    No reflection is applied at ``T_r``: the single-period solution ends with
    the inerton velocity at ``-c``.
    """
    v0r, Tr = float(ens.v0r[r]), float(ens.T_r[r])
    if not v0r > 0:
        raise DegenerateSystemError(f"inerton {r} has emission speed {v0r!r}; the system is singular")
    system = _System(v0r, ens.c, Tr)
    # no event lies inside a single period; detection would only catch the end point
    cfg = replace(cfg, event_mode="scheduled")
    return _integrate(system, (0.0, v0r, 0.0, ens.c), (0.0, Tr), cfg, t_eval, reflect_at_end=False)


def analytic_residual(t, dq: DerivedQuantities, *, reflect=True, cusp_tol=1e-9):
    """Residuals of both equations of motion for the closed-form solution at time ``t``.

    Returns ``(r_particle, r_cloud)``.  With ``reflect=False`` the cloud
    velocity loses its sign alternation between periods, which breaks the
    equations from the second period on.

    Raises ``ValueError`` within ``cusp_tol * T`` of ``nT`` or ``(n + 1/2) T``.
    """
    if dq.v0 == 0:
        raise DegenerateSystemError("v0 = 0: the cloud equation is singular")
    t_arr = np.asarray(t, dtype=float)
    _, f = period_index(t_arr, dq.T)
    near = np.minimum(np.minimum(f, np.abs(f - 0.5)), 1.0 - f)
    if np.any(near <= cusp_tol):
        raise ValueError("residual requested at a cusp point (t near nT or (n+1/2)T)")
    w = dq.omega
    Xddot = particle_acceleration(t_arr, dq)
    Xdot = particle_velocity(t_arr, dq)
    if reflect:
        xdot = cloud_velocity(t_arr, dq)
        xddot = cloud_acceleration(t_arr, dq)
    else:
        xdot = dq.c * np.cos(np.pi * t_arr / dq.T)
        xddot = -dq.c * w * np.sin(np.pi * t_arr / dq.T)
    r1 = Xddot + w * (dq.v0 / dq.c) * xdot
    r2 = xddot - w * (dq.c / dq.v0) * (Xdot - dq.v0)
    if np.ndim(r1) == 0:
        return float(r1), float(r2)
    return r1, r2


def oracle_errors(series: TrajectorySeries, dq: DerivedQuantities) -> np.ndarray:
    """Absolute differences ``(n, 4)`` between a numerical run and the closed forms."""
    from .trajectories import cloud_position, particle_position

    exact = np.column_stack([
        np.atleast_1d(particle_position(series.t, dq)),
        np.atleast_1d(particle_velocity(series.t, dq)),
        np.atleast_1d(cloud_position(series.t, dq)),
        np.atleast_1d(cloud_velocity(series.t, dq)),
    ])
    return np.abs(series.as_array() - exact)


def velocity_invariant(series: TrajectorySeries, v0, c):
    """``(Xdot - v0)^2 / v0^2 + xdot^2 / c^2``; equal to 1 on the exact trajectory."""
    return (series.Xdot - v0) ** 2 / v0 ** 2 + series.xdot ** 2 / c ** 2
