"""Rotational-state cooling of trapped molecular ions by adiabatic passage.

Deterministic Lindblad-master-equation simulator on the joint rotational x
motional state space, with preset STIRAP / SCRAP / CARP pulse schedules,
analytic transfer estimates, and a parameter-sweep harness.
"""
from .basis import NU, EXCITED, UNCOUPLED, BasisIndex, SystemSpec, build_basis, ladder_ops, sigma_ops
from .pulses import (DetuningProgram, PulseEnvelope, PulseParams, PulseSchedule,
                     RamanStep, detuning_at, envelope_at, make_schedule)
from .dynamics import DensityState, diagonal_state, hamiltonian_at, master_rhs, motional_reset
from .integrate import IntegrationError, IntegratorConfig, SimResult, run, run_cycles
from .analysis import (EffectiveTwoLevel, chain_estimate, effective_two_level,
                       efficiency, loss_u, lz_exponent, lz_prediction,
                       mixed_lambda_state, populated_levels, scrap_margin,
                       thermal_state)
from .config import ConfigError, RunConfig
from .sweep import SweepPlan, SweepRow, run_sweep

__version__ = "0.1.0"

__all__ = [
    "NU", "EXCITED", "UNCOUPLED",
    "BasisIndex", "SystemSpec", "build_basis", "ladder_ops", "sigma_ops",
    "DetuningProgram", "PulseEnvelope", "PulseParams", "PulseSchedule",
    "RamanStep", "detuning_at", "envelope_at", "make_schedule",
    "DensityState", "diagonal_state", "hamiltonian_at", "master_rhs", "motional_reset",
    "IntegrationError", "IntegratorConfig", "SimResult", "run", "run_cycles",
    "EffectiveTwoLevel", "chain_estimate", "effective_two_level", "efficiency",
    "loss_u", "lz_exponent", "lz_prediction", "mixed_lambda_state",
    "populated_levels", "scrap_margin", "thermal_state",
    "ConfigError", "RunConfig",
    "SweepPlan", "SweepRow", "run_sweep",
    "__version__",
]
