"""Action integrals, de Broglie relations and the plane-wave check."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .model import DerivedQuantities, ParameterError
from .trajectories import oscillator_amplitude


def turning_point(E, M, T):
    """Largest classically allowed ``X`` of the oscillator, ``sqrt(2E/M) / (pi/T)``."""
    return oscillator_amplitude(E, M, T)


def oscillator_momentum(X, E, M, T):
    """``p(X) = sqrt(2M [E - M (pi/T)^2 X^2 / 2])``, clamped at zero past the turning point."""
    w = math.pi / T
    kinetic = E - M * w ** 2 * np.asarray(X, dtype=float) ** 2 / 2.0
    return np.sqrt(2.0 * M * np.maximum(kinetic, 0.0))


def shortened_action_closed_form(X, E, M, T):
    u = np.clip(np.asarray(X, dtype=float) / turning_point(E, M, T), 0.0, 1.0)
    return E * T / math.pi * (np.arcsin(u) + u * np.sqrt(1.0 - u ** 2))


def shortened_action(X, E, M, T, *, rel_tol=1e-13):
    """Abbreviated action ``int_0^X p dX'`` by quadrature.

    The square-root singularity at the turning point is removed with
    ``X' = X_max sin(theta)``, which turns the integrand into a smooth
    ``p(X_max sin theta) X_max cos theta`` on ``[0, arcsin(X/X_max)]``.
    """
    if E < 0 or not (M > 0 and T > 0):
        raise ValueError("need E >= 0, M > 0, T > 0")
    x_max = turning_point(E, M, T)
    if X < 0 or X > x_max * (1.0 + 1e-15):
        raise ValueError(f"X={X!r} outside the allowed region [0, {x_max!r}]")
    if X == 0 or E == 0:
        return 0.0
    theta_end = math.asin(min(X / x_max, 1.0))

    def integrand(theta):
        return oscillator_momentum(x_max * np.sin(theta), E, M, T) * x_max * np.cos(theta)

    value, _ = quadrature.integrate(integrand, 0.0, theta_end, rel_tol=rel_tol, abs_tol=0.0)
    return value


def cyclic_action(E, M, T, *, rel_tol=1e-13):
    """Loop integral of ``p dX`` over one cycle ``2T`` of the oscillator, done in time."""
    if E < 0:
        raise ValueError(f"E must be non-negative, got {E!r}")
    if E == 0:
        return 0.0
    amp = oscillator_amplitude(E, M, T)
    w = math.pi / T

    def integrand(t):
        Xdot = amp * w * np.cos(w * t)
        return M * Xdot * Xdot

    value, _ = quadrature.integrate(integrand, 0.0, 2.0 * T, rel_tol=rel_tol, abs_tol=0.0)
    return value


@dataclass(frozen=True)
class ActionResult:
    X: np.ndarray
    S1: np.ndarray
    J: float
    X_max: float


def action_table(E, M, T, n_points: int = 9) -> ActionResult:
    x_max = turning_point(E, M, T)
    X = np.linspace(0.0, x_max, n_points)
    S1 = np.array([shortened_action(xi, E, M, T) for xi in X])
    return ActionResult(X=X, S1=S1, J=cyclic_action(E, M, T), X_max=x_max)


@dataclass(frozen=True)
class DeBroglie:
    wavelength: float
    nu: float
    wavelength_residual: float
    nu_residual: float


def de_broglie(dq: DerivedQuantities, h: float | None = None) -> DeBroglie:
    """Wavelength ``h/(M v0)`` and frequency ``E/h`` against the mechanical ``lam`` and ``1/2T``.

    ``h`` defaults to the closure value in ``dq``; passing a different one
    shows how far the relations are from holding.
    """
    if dq.v0 == 0:
        raise ParameterError("the de Broglie wavelength is undefined for v0 = 0")
    h = dq.h if h is None else h
    wavelength = h / (dq.M * dq.v0)
    nu = dq.E / h
    return DeBroglie(
        wavelength=wavelength,
        nu=nu,
        wavelength_residual=wavelength - dq.lam,
        nu_residual=nu - 1.0 / (2.0 * dq.T),
    )


@dataclass(frozen=True)
class WaveSpec:
    psi0: complex
    wavelength: float
    nu: float
    h: float

    def __post_init__(self):
        if not (self.wavelength > 0 and self.nu > 0 and abs(self.psi0) > 0 and self.h > 0):
            raise ValueError("WaveSpec needs wavelength, nu, h > 0 and psi0 != 0")

    @property
    def hbar(self):
        return self.h / (2.0 * math.pi)

    @property
    def wavenumber(self):
        return 2.0 * math.pi / self.wavelength

    @classmethod
    def from_quantities(cls, dq: DerivedQuantities, psi0: complex = 1.0):
        return cls(psi0=psi0, wavelength=dq.h / dq.p0, nu=dq.E / dq.h, h=dq.h)


def wavefunction(X, t, w: WaveSpec):
    """Plane wave ``psi0 exp[2 pi i (X/lambda - nu t)]``."""
    phase = 2.0 * np.pi * (np.asarray(X, dtype=float) / w.wavelength - w.nu * np.asarray(t, dtype=float))
    out = w.psi0 * np.exp(1j * phase)
    return complex(out) if np.ndim(out) == 0 else out


def schrodinger_residuals(w: WaveSpec, M, E, X, t):
    """Largest normalised residuals of the stationary and time-dependent wave equations.

    The plane-wave derivatives are taken analytically: ``d2psi/dX2 = -k^2 psi``
    and ``dpsi/dt = -2 pi i nu psi``.  Returns ``(r_stationary, r_time)``, each
    divided by ``E |psi0|``.
    """
    X, t = np.broadcast_arrays(np.asarray(X, dtype=float), np.asarray(t, dtype=float))
    psi = wavefunction(X, t, w)
    d2psi = -(w.wavenumber ** 2) * psi
    dpsi_dt = -2j * math.pi * w.nu * psi
    kinetic = w.hbar ** 2 / (2.0 * M) * d2psi
    r_stat = kinetic + E * psi
    r_time = 1j * w.hbar * dpsi_dt + kinetic
    scale = E * abs(w.psi0)
    return float(np.max(np.abs(r_stat)) / scale), float(np.max(np.abs(r_time)) / scale)
