"""Particle and inerton-cloud dynamics: closed-form trajectories, an event-aware
integrator, Lagrangian/Hamiltonian diagnostics and action quantization."""
from .model import DerivedQuantities, ModelParams, ParameterError, derive_quantities, ensemble_velocities
from .trajectories import TrajectorySeries, sample_trajectory, time_grid
from .dynamics import IntegratorConfig, canonical_initial_state, integrate
from .verify import run_verification

__version__ = "0.1.0"

__all__ = [
    "DerivedQuantities",
    "IntegratorConfig",
    "ModelParams",
    "ParameterError",
    "TrajectorySeries",
    "canonical_initial_state",
    "derive_quantities",
    "ensemble_velocities",
    "integrate",
    "run_verification",
    "sample_trajectory",
    "time_grid",
]
