"""Scalar parameters of the particle/inerton-cloud system and the algebra linking them.

Everything here is a pure function of its inputs.  The default unit system is
natural (``c = M0 = T = 1``) but every formula keeps ``c`` explicit, so SI
inputs work unchanged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

H_DERIVED = "derived"
H_GIVEN = "given"


class ParameterError(ValueError):
    """Raised when physical parameters fall outside the model's domain."""


def _check_subluminal(v0, c):
    if not c > 0:
        raise ParameterError(f"c must be positive, got {c!r}")
    v = np.asarray(v0, dtype=float)
    if np.any(v < 0):
        raise ParameterError(f"v0 must be non-negative, got {v0!r}")
    if np.any(v >= c):
        raise ParameterError(f"v0 must satisfy v0 < c (v0={v0!r}, c={c!r})")


def _beta2(v0, c):
    return (np.asarray(v0, dtype=float) / c) ** 2


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class ModelParams:
    """Physical inputs of one experiment.

    ``h_mode`` selects how the action quantum is closed: ``"derived"`` takes
    ``T`` as given and sets ``h = 2 T E``; ``"given"`` takes ``h`` and solves
    ``T = h / (2 E)`` (``T`` must then be left as ``None``).
    """

    M0: float = 1.0
    v0: float = 0.6
    c: float = 1.0
    T: float | None = 1.0
    N: int = 4
    h_mode: Literal["derived", "given"] = H_DERIVED
    h: float | None = None

    def __post_init__(self):
        if not self.M0 > 0:
            raise ParameterError(f"M0 must be positive, got {self.M0!r}")
        _check_subluminal(self.v0, self.c)
        if int(self.N) != self.N or self.N < 1:
            raise ParameterError(f"N must be an integer >= 1, got {self.N!r}")
        if self.h_mode == H_DERIVED:
            if self.h is not None:
                raise ParameterError("h must not be set when h_mode is 'derived'")
            if self.T is None or not self.T > 0:
                raise ParameterError(f"T must be positive, got {self.T!r}")
        elif self.h_mode == H_GIVEN:
            if self.h is None or not self.h > 0:
                raise ParameterError(f"h_mode 'given' needs a positive h, got {self.h!r}")
            if self.T is not None:
                raise ParameterError("T is derived from h when h_mode is 'given'; leave it unset")
            if self.v0 == 0:
                raise ParameterError("h_mode 'given' needs v0 > 0 (T = h/2E is undefined at rest)")
        else:
            raise ParameterError(f"unknown h_mode {self.h_mode!r}")


@dataclass(frozen=True)
class DerivedQuantities:
    """All quantities fixed by a :class:`ModelParams`.

    ``lam`` is the particle's spatial period, ``Lam`` the cloud's.  The inputs
    ``M0``, ``v0``, ``c`` and the resolved ``T`` are carried along so that the
    evaluators downstream need only this one object.
    """

    M0: float
    v0: float
    c: float
    T: float
    lam: float
    Lam: float
    m0: float
    M: float
    m: float
    E: float
    nu: float
    p0: float
    h: float

    @property
    def hbar(self) -> float:
        return self.h / (2.0 * math.pi)

    @property
    def omega(self) -> float:
        """Angular rate pi/T of the particle/cloud exchange."""
        return math.pi / self.T

    @property
    def total_energy(self) -> float:
        """``M c^2``, kept only as a comparison value; never used in the h closure."""
        return self.M * self.c ** 2


def lorentz_factor(v0, c):
    _check_subluminal(v0, c)
    return _scalar(1.0 / np.sqrt(1.0 - _beta2(v0, c)))


def relativistic_mass(M0, v0, c):
    """Moving mass ``M0 / sqrt(1 - v0^2/c^2)``.

    Raises
    ------
    ParameterError
        If ``v0 >= c`` or ``v0 < 0``.
    """
    _check_subluminal(v0, c)
    return _scalar(M0 / np.sqrt(1.0 - _beta2(v0, c)))


def mass_volume_scaling(v0, c):
    """Mass gain factor from the contraction of the particle volume along the motion."""
    return relativistic_mass(1.0, v0, c)


def cloud_rest_mass(M0, v0, c):
    """Rest mass of the cloud fixed at emission, ``m0 c^2 = M0 v0^2``."""
    _check_subluminal(v0, c)
    return _scalar(M0 * _beta2(v0, c))


def derive_quantities(params: ModelParams) -> DerivedQuantities:
    M0, v0, c = params.M0, params.v0, params.c
    sqrt_1mb2 = math.sqrt(1.0 - (v0 / c) ** 2)
    M = M0 / sqrt_1mb2
    m0 = cloud_rest_mass(M0, v0, c)
    E = M * v0 ** 2 / 2.0
    if params.h_mode == H_DERIVED:
        T = float(params.T)
        h = 2.0 * T * E
    else:
        h = float(params.h)
        T = h / (2.0 * E)
    return DerivedQuantities(
        M0=M0,
        v0=v0,
        c=c,
        T=T,
        lam=v0 * T,
        Lam=c * T,
        m0=m0,
        M=M,
        m=m0 / sqrt_1mb2,
        E=E,
        nu=1.0 / (2.0 * T),
        p0=M * v0,
        h=h,
    )


@dataclass(frozen=True)
class EnsembleVelocities:
    """Per-inerton emission data, index ``r = 0 .. N-1``."""

    c: float
    v0r: np.ndarray
    m_r: np.ndarray
    T_r: np.ndarray
    lambda_r: np.ndarray
    Lambda_r: np.ndarray

    def __len__(self):
        return len(self.v0r)


def ensemble_velocities(params: ModelParams, T_r: Sequence[float] | None = None) -> EnsembleVelocities:
    """Emission speeds ``v0 (1 - sin(r pi / 2N))`` and the quantities they fix.

    The half-period of each inerton defaults to the particle's ``T``; pass
    ``T_r`` (one positive value per inerton) to override it.
    """
    dq = derive_quantities(params)
    N = int(params.N)
    r = np.arange(N)
    v0r = dq.v0 * (1.0 - np.sin(r * np.pi / (2 * N)))
    v0r[0] = dq.v0
    if T_r is None:
        periods = np.full(N, dq.T)
    else:
        periods = np.asarray(T_r, dtype=float)
        if periods.shape != (N,):
            raise ParameterError(f"T_r needs {N} entries, got {periods.shape}")
        if np.any(periods <= 0):
            raise ParameterError("every T_r must be positive")
    return EnsembleVelocities(
        c=dq.c,
        v0r=v0r,
        m_r=dq.M0 * v0r ** 2 / dq.c ** 2,
        T_r=periods,
        lambda_r=v0r * periods,
        Lambda_r=dq.c * periods,
    )


@dataclass(frozen=True)
class HydroParams:
    rho0: float
    rho: float
    deltaV: float
    deltaL: float
    deltaT: float


def density_transform(rho0, v0, c):
    """Density of the moving fluid element, ``rho0 / (1 - v0^2/c^2)``."""
    _check_subluminal(v0, c)
    return _scalar(rho0 / (1.0 - _beta2(v0, c)))


def hydro_params(rho0, v0, c, lam, T, stage: int = 1, rho=None) -> HydroParams:
    """Finite differences over one quarter of the velocity cycle.

    ``stage=1`` is the deceleration ``v0 -> 0`` (``dv = -v0``), ``stage=2``
    the subsequent acceleration ``0 -> v0``.
    """
    _check_subluminal(v0, c)
    if not T > 0:
        raise ParameterError(f"T must be positive, got {T!r}")
    if not math.isclose(lam, v0 * T, rel_tol=1e-12, abs_tol=1e-300):
        raise ParameterError(f"lambda={lam!r} is inconsistent with v0*T={v0 * T!r}")
    if stage not in (1, 2):
        raise ParameterError(f"stage must be 1 or 2, got {stage!r}")
    if rho is None:
        rho = density_transform(rho0, v0, c)
    return HydroParams(
        rho0=rho0,
        rho=rho,
        deltaV=-v0 if stage == 1 else v0,
        deltaL=lam / 2.0,
        deltaT=T / 2.0,
    )


def hydrodynamic_residual(rho0, v0, c, lam, T, *, stage: int = 1, rho=None) -> float:
    """Normalised mismatch of the discrete momentum balance ``rho dv/dt = -c^2 drho/dl``.

    Both sides are compared in cross-multiplied form, ``rho dv dl`` against
    ``-c^2 drho dt``, and divided by ``c^2 rho dt``: the size of the terms whose
    difference forms ``drho``.  This keeps the rest case finite and the
    residual at rounding level for small ``v0``, where ``drho`` itself is tiny.
    With the balance broken by ``rho = rho0`` the residual is ``-v0^2/c^2``.

    ``rho`` defaults to :func:`density_transform`; pass another value to probe
    the balance with a wrong density.
    """
    hp = hydro_params(rho0, v0, c, lam, T, stage=stage, rho=rho)
    drho = hp.rho - hp.rho0 if stage == 1 else hp.rho0 - hp.rho
    left = hp.rho * hp.deltaV * hp.deltaL
    right = -(c ** 2) * drho * hp.deltaT
    return (left - right) / (c ** 2 * hp.rho * hp.deltaT)
