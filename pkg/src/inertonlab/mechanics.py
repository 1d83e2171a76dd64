"""Lagrangians, momenta and Hamiltonians of the particle/cloud system.

The Hamiltonian forms are evaluated as written, without assuming that they
agree with one another; :func:`hamiltonians` returns all of them so their
differences can be reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import DerivedQuantities, ParameterError, _check_subluminal
from .trajectories import oscillator_amplitude


def classical_lagrangian(M0, v0, c):
    """Free relativistic Lagrangian ``-M0 c^2 sqrt(1 - v0^2/c^2)``."""
    _check_subluminal(v0, c)
    return -M0 * c ** 2 * math.sqrt(1.0 - (v0 / c) ** 2)


def lagrangian_radical(X, Xdot, x, xdot, dq: DerivedQuantities):
    """The quantity under the square root of the particle/cloud Lagrangian.

    Can be negative; the Lagrangian is then not evaluable.
    """
    coupling = 2.0 * dq.omega * math.sqrt(dq.m0 * dq.M0) * (X * xdot + dq.v0 * x)
    bracket = dq.M0 * Xdot ** 2 + dq.m0 * xdot ** 2 - coupling
    return 1.0 - bracket / (dq.M0 * dq.c ** 2)


def lagrangian_17(X, Xdot, x, xdot, dq: DerivedQuantities):
    """Particle/cloud Lagrangian and its radical.

    Returns ``(L, radical)``.  Where the radical is negative ``L`` is NaN;
    this is reported, not raised.
    """
    radical = lagrangian_radical(X, Xdot, x, xdot, dq)
    with np.errstate(invalid="ignore"):
        L = -dq.M0 * dq.c ** 2 * np.sqrt(np.where(radical >= 0, radical, np.nan))
    if np.ndim(L) == 0:
        return float(L), float(radical)
    return L, radical


def canonical_transform(X, xdot, dq: DerivedQuantities):
    """Cloud velocity shifted by the particle coordinate, ``xdot - (pi/T) sqrt(M0/m0) X``."""
    if dq.m0 <= 0:
        raise ParameterError("the canonical transform needs a cloud with m0 > 0 (v0 > 0)")
    return xdot - dq.omega * math.sqrt(dq.M0 / dq.m0) * X


def lagrangian_22(X, Xdot, x, xdot, dq: DerivedQuantities):
    """Lagrangian rewritten in the transformed cloud velocity.

    Returns ``(L, radical)`` like :func:`lagrangian_17`.
    """
    xt_dot = canonical_transform(X, xdot, dq)
    bracket = (
        dq.M0 * Xdot ** 2
        - dq.M0 * dq.omega ** 2 * X ** 2
        + dq.m0 * xt_dot ** 2
        - 2.0 * dq.omega * math.sqrt(dq.m0 * dq.M0) * dq.v0 * x
    )
    radical = 1.0 - bracket / (dq.M0 * dq.c ** 2)
    with np.errstate(invalid="ignore"):
        L = -dq.M0 * dq.c ** 2 * np.sqrt(np.where(radical >= 0, radical, np.nan))
    if np.ndim(L) == 0:
        return float(L), float(radical)
    return L, radical


def momenta(X, Xdot, xdot, dq: DerivedQuantities):
    """Particle momentum ``M Xdot`` and cloud momentum ``m * transformed velocity``.

    A massless cloud (``v0 = 0``) carries no momentum.
    """
    p = dq.M * Xdot
    if dq.m0 == 0:
        return p, 0.0 * np.asarray(xdot, dtype=float)
    return p, dq.m * canonical_transform(X, xdot, dq)


@dataclass(frozen=True)
class HamiltonianValues:
    H24: float
    H27: float
    H28: float
    Heff: float


def _cloud_kinetic(p_tilde, dq):
    if dq.m == 0:
        return 0.0 * np.asarray(p_tilde, dtype=float)
    return p_tilde ** 2 / dq.m


def hamiltonians(X, Xdot, x, xdot, dq: DerivedQuantities) -> HamiltonianValues:
    """Coordinate form, momentum form, combined form and the particle's effective part."""
    M, M0, c, w = dq.M, dq.M0, dq.c, dq.omega
    p, p_tilde = momenta(X, Xdot, xdot, dq)
    cloud_potential = math.pi * math.sqrt(dq.m * M0) * dq.v0 * x / dq.T
    oscillator = M * w ** 2 * X ** 2
    heff = p ** 2 / (2.0 * M) + oscillator / 2.0
    return HamiltonianValues(
        H24=oscillator + M * c ** 2 + cloud_potential,
        H27=p ** 2 / M + _cloud_kinetic(p_tilde, dq) + (M0 * c) ** 2 / M,
        H28=(
            heff
            + ((M * c) ** 2 + (M0 * c) ** 2) / (2.0 * M)
            + _cloud_kinetic(p_tilde, dq) / 2.0
            + cloud_potential
        ),
        Heff=heff,
    )


def effective_hamiltonian(X, p, M, T):
    return p ** 2 / (2.0 * M) + M * (math.pi / T) ** 2 * X ** 2 / 2.0


def heff_conservation(E, M, T, grid, amplitude_scale=1.0):
    """Largest ``|Heff(t) - E|`` along the bounded oscillator solution.

    ``amplitude_scale`` multiplies the oscillator amplitude; values other
    than 1 give a trajectory with the wrong energy, as a negative control.
    """
    if E < 0:
        raise ValueError(f"E must be non-negative, got {E!r}")
    t = np.asarray(grid, dtype=float)
    w = math.pi / T
    amp = amplitude_scale * oscillator_amplitude(E, M, T)
    X = amp * np.sin(w * t)
    p = M * amp * w * np.cos(w * t)
    return float(np.max(np.abs(effective_hamiltonian(X, p, M, T) - E)))


@dataclass(frozen=True)
class MechanicsSample:
    L2: float
    L17: float
    L22: float
    radical: float
    p: float
    p_tilde: float
    x_tilde_dot: float
    H24: float
    H27: float
    H28: float
    Heff: float


def evaluate_state(X, Xdot, x, xdot, dq: DerivedQuantities) -> MechanicsSample:
    L17, radical = lagrangian_17(X, Xdot, x, xdot, dq)
    if dq.m0 > 0:
        L22, _ = lagrangian_22(X, Xdot, x, xdot, dq)
        xt_dot = canonical_transform(X, xdot, dq)
    else:
        L22, xt_dot = L17, xdot
    p, p_tilde = momenta(X, Xdot, xdot, dq)
    H = hamiltonians(X, Xdot, x, xdot, dq)
    return MechanicsSample(
        L2=classical_lagrangian(dq.M0, dq.v0, dq.c),
        L17=L17,
        L22=L22,
        radical=radical,
        p=float(p),
        p_tilde=float(p_tilde),
        x_tilde_dot=float(xt_dot),
        H24=float(H.H24),
        H27=float(H.H27),
        H28=float(H.H28),
        Heff=float(H.Heff),
    )


def attach_diagnostics(series, dq: DerivedQuantities):
    """Fill ``H_eff``, ``L17`` and ``radical`` columns of a trajectory series in place."""
    L17, radical = lagrangian_17(series.X, series.Xdot, series.x, series.xdot, dq)
    p = dq.M * series.Xdot
    series.diagnostics["H_eff"] = effective_hamiltonian(series.X, p, dq.M, dq.T)
    series.diagnostics["L17"] = np.atleast_1d(L17)
    series.diagnostics["radical"] = np.atleast_1d(radical)
    return series
