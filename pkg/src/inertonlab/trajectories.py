"""Closed-form particle and cloud trajectories.

The multi-period forms are evaluated through the reduced phase
``f = t/T - floor(t/T)``: ``|sin(pi t/T)| = sin(pi f)`` and
``(-1)^floor(t/T) cos(pi t/T) = cos(pi f)``.  This makes ``t = nT`` land on
``f = 0`` exactly, so the particle speed there is ``v0`` to the bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import DerivedQuantities, EnsembleVelocities

_SNAP_ULPS = 4


class TrajectoryDomainError(ValueError):
    pass


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise TrajectoryDomainError("time must be finite and non-negative")
    return t


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def period_index(t, T):
    """``floor(t/T)`` and the reduced phase ``t/T - floor(t/T)``.

    Quotients within a few ulps of an integer are snapped to it, so that
    ``n*T`` computed in floating point is treated as an exact multiple.
    """
    q = np.asarray(t, dtype=float) / T
    nearest = np.rint(q)
    snap = np.abs(q - nearest) <= _SNAP_ULPS * np.finfo(float).eps * np.maximum(1.0, np.abs(q))
    q = np.where(snap, nearest, q)
    n = np.floor(q)
    return n, q - n


def particle_velocity(t, dq: DerivedQuantities):
    """Particle speed ``v0 (1 - |sin(pi t/T)|)``, back to ``v0`` at every ``t = nT``."""
    t = _check_time(t)
    _, f = period_index(t, dq.T)
    return _out(dq.v0 * (1.0 - np.sin(np.pi * f)))


def particle_position(t, dq: DerivedQuantities, branch=None):
    """Particle coordinate along its path.

    ``branch`` forces the integer part ``floor(t/T)`` used in the formula.  It
    exists to evaluate the two one-sided limits at ``t = nT`` (branches
    ``n-1`` and ``n``), which coincide.
    """
    t = _check_time(t)
    if branch is None:
        n, f = period_index(t, dq.T)
        osc = np.cos(np.pi * f)
    else:
        n = np.asarray(branch, dtype=float)
        osc = (-1.0) ** n * np.cos(np.pi * t / dq.T)
    return _out(dq.v0 * t + dq.lam / np.pi * (osc - (1.0 + 2.0 * n)))


def cloud_position(t, dq: DerivedQuantities):
    """Particle-cloud distance ``(Lam/pi) |sin(pi t/T)|``.

    At rest (``v0 = 0``) no cloud is emitted and the distance stays 0.
    """
    t = _check_time(t)
    _, f = period_index(t, dq.T)
    if dq.v0 == 0:
        return _out(np.zeros_like(f))
    return _out(dq.Lam / np.pi * np.sin(np.pi * f))


def cloud_velocity(t, dq: DerivedQuantities, side: str = "right"):
    """Cloud velocity ``c (-1)^floor(t/T) cos(pi t/T)``.

    The velocity jumps from ``-c`` to ``+c`` at every ``t = nT``.  The default
    is the right-continuous value; ``side="left"`` gives the limit from below
    at exact multiples of ``T`` and is identical elsewhere.  At rest the
    initial value ``c`` is held, matching the constant rest state.
    """
    t = _check_time(t)
    n, f = period_index(t, dq.T)
    if dq.v0 == 0:
        if side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {side!r}")
        return _out(np.full_like(f, dq.c))
    v = dq.c * np.cos(np.pi * f)
    if side == "left":
        v = np.where((f == 0) & (n >= 1), -dq.c, v)
    elif side != "right":
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return _out(v)


def particle_acceleration(t, dq: DerivedQuantities):
    """Closed-form derivative of :func:`particle_velocity`; one-sided (right) at cusps."""
    t = _check_time(t)
    _, f = period_index(t, dq.T)
    return _out(-dq.v0 * dq.omega * np.cos(np.pi * f))


def cloud_acceleration(t, dq: DerivedQuantities):
    t = _check_time(t)
    _, f = period_index(t, dq.T)
    if dq.v0 == 0:
        return _out(np.zeros_like(f))
    return _out(-dq.c * dq.omega * np.sin(np.pi * f))


def oscillator_position(t, E, M, T):
    """Bounded harmonic-oscillator coordinate with energy ``E``.

    Amplitude is ``sqrt(2E/M) / (pi/T)``, which equals ``lam/pi`` for
    ``E = M v0^2 / 2``.
    """
    if E < 0:
        raise ValueError(f"E must be non-negative, got {E!r}")
    if not (M > 0 and T > 0):
        raise ValueError("M and T must be positive")
    t = np.asarray(t, dtype=float)
    return _out(oscillator_amplitude(E, M, T) * np.sin(np.pi * t / T))


def oscillator_amplitude(E, M, T):
    return math.sqrt(2.0 * E / M) / (math.pi / T)


@dataclass(frozen=True)
class InertonPeriodState:
    r: int
    t_r: float
    x_perp: float
    xdot_perp: float
    xdot_par: float
    X_r: float
    Xdot_r: float


def inerton_period_solution(r: int, t_r, ens: EnsembleVelocities) -> InertonPeriodState:
    """Single-period solution for the ``r``-th inerton and the particle.

    Only valid for ``0 <= t_r <= T_r``; multi-period motion is described by
    the particle/cloud closed forms instead.
    """
    if not 0 <= r < len(ens):
        raise IndexError(f"inerton index {r} outside 0..{len(ens) - 1}")
    v0r, Tr = float(ens.v0r[r]), float(ens.T_r[r])
    if not 0 <= t_r <= Tr:
        raise TrajectoryDomainError(f"t_r={t_r!r} outside the single period [0, {Tr}]")
    phase = math.pi * t_r / Tr
    return InertonPeriodState(
        r=r,
        t_r=t_r,
        x_perp=float(ens.Lambda_r[r]) / math.pi * math.sin(phase),
        xdot_perp=ens.c * math.cos(phase),
        xdot_par=3.0 * v0r / (2.0 * math.pi),
        X_r=v0r * t_r + float(ens.lambda_r[r]) / math.pi * (math.cos(phase) - 1.0),
        Xdot_r=v0r * (1.0 - math.sin(phase)),
    )


@dataclass
class TrajectorySeries:
    """Time-ordered samples of ``(t, X, Xdot, x, xdot)`` plus optional diagnostics.

    ``diagnostics`` maps a column name (``H_eff``, ``L17``, ``radical``) to an
    array aligned with ``t``.  ``meta`` carries grid and run information.
    """

    t: np.ndarray
    X: np.ndarray
    Xdot: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    diagnostics: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        if self.t.size == 0:
            raise ValueError("a trajectory series needs at least one sample")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("sample times must be strictly increasing")
        for name in ("X", "Xdot", "x", "xdot"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != self.t.shape:
                raise ValueError(f"column {name} has shape {arr.shape}, expected {self.t.shape}")
            setattr(self, name, arr)
        self.meta.setdefault("t0", float(self.t[0]))
        self.meta.setdefault("t_end", float(self.t[-1]))

    def __len__(self):
        return self.t.size

    def state(self, i):
        return (self.t[i], self.X[i], self.Xdot[i], self.x[i], self.xdot[i])

    def as_array(self):
        """Samples stacked as an ``(n, 4)`` array ordered ``X, Xdot, x, xdot``."""
        return np.column_stack([self.X, self.Xdot, self.x, self.xdot])


def time_grid(t_end_periods: float, samples_per_period: int, T: float) -> np.ndarray:
    """Uniform grid ``k T / samples_per_period`` from 0 up to ``t_end_periods * T``."""
    if samples_per_period < 1:
        raise ValueError("samples_per_period must be >= 1")
    n = int(round(t_end_periods * samples_per_period))
    return np.arange(n + 1) * (T / samples_per_period)


def sample_trajectory(grid, dq: DerivedQuantities) -> TrajectorySeries:
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty time grid")
    _check_time(grid)
    step = float(grid[1] - grid[0]) if grid.size > 1 else 0.0
    return TrajectorySeries(
        t=grid,
        X=np.atleast_1d(particle_position(grid, dq)),
        Xdot=np.atleast_1d(particle_velocity(grid, dq)),
        x=np.atleast_1d(cloud_position(grid, dq)),
        xdot=np.atleast_1d(cloud_velocity(grid, dq)),
        meta={"source": "analytic", "step": step},
    )
