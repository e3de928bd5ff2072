"""Initial states, transfer metrics, and closed-form adiabaticity estimates."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisIndex, SystemSpec, UNCOUPLED
from .dynamics import DensityState
from .pulses import PulseSchedule, detuning_at, envelope_at


def thermal_state(basis: BasisIndex, spec: SystemSpec) -> DensityState:
    """Rotational thermal state in the motional ground state.

    P_J = (2J+1) exp(-beta_b J(J+1)) / Z on |J, 0>, with Z summed up to
    j_max; e and u start unpopulated.
    """
    j = np.arange(basis.j_max + 1)
    weights = (2 * j + 1) * np.exp(-spec.beta_b * j * (j + 1))
    weights /= weights.sum()
    m = np.zeros((basis.dim, basis.dim), dtype=complex)
    for jj, p in zip(j, weights):
        m[basis.index(jj, 0), basis.index(jj, 0)] = p
    return DensityState(matrix=m, time=0.0, basis=basis)


def mixed_lambda_state(basis: BasisIndex, p_ground: float,
                       p_excited_rot: float) -> DensityState:
    """Two-component mixture P(|0,0>) = p_ground, P(|1,0>) = p_excited_rot."""
    for p in (p_ground, p_excited_rot):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability {p} outside [0, 1]")
    if abs(p_ground + p_excited_rot - 1.0) > 1e-9:
        raise ValueError("p_ground + p_excited_rot must equal 1")
    m = np.zeros((basis.dim, basis.dim), dtype=complex)
    m[basis.index(0, 0), basis.index(0, 0)] = p_ground
    m[basis.index(1, 0), basis.index(1, 0)] = p_excited_rot
    return DensityState(matrix=m, time=0.0, basis=basis)


def efficiency(rho: DensityState) -> float:
    """Total rotational ground-state population, summed over all n."""
    return float(rho.populations()[rho.basis.block(0)].sum())


def loss_u(rho: DensityState) -> float:
    """Total population of the uncoupled sink level."""
    return float(rho.populations()[rho.basis.block(UNCOUPLED)].sum())


@dataclass(frozen=True)
class EffectiveTwoLevel:
    """Far-detuned reduction of one Raman step at a single time."""

    omega_eff: float   # eta * pump * stokes / pump detuning
    delta_eff: float   # two-photon detuning plus differential Stark shift
    stark_s: float     # (eta * stokes)^2 / (4 * stokes detuning)
    stark_p: float     # pump^2 / (4 * pump detuning)


def effective_two_level(spec: SystemSpec, schedule: PulseSchedule,
                        step: int, t: float) -> EffectiveTwoLevel:
    """Evaluate the effective two-level quantities of one step at time t."""
    s = schedule.steps[step]
    wp = envelope_at(s.pump_env, t)
    ws = envelope_at(s.stokes_env, t)
    dp = detuning_at(s.pump_det, t)
    ds = detuning_at(s.stokes_det, t)
    if dp == 0.0 or ds == 0.0:
        raise ValueError("effective two-level reduction is invalid at zero detuning")
    stark_s = (spec.eta * ws) ** 2 / (4.0 * ds)
    stark_p = wp ** 2 / (4.0 * dp)
    return EffectiveTwoLevel(
        omega_eff=spec.eta * wp * ws / dp,
        delta_eff=(ds - dp) + stark_s - stark_p,
        stark_s=stark_s,
        stark_p=stark_p,
    )


def scrap_margin(omega0: float, width: float, tau: float, delta_p: float) -> float:
    """Adiabaticity ratio omega0^2 T^2 / (|tau| |delta_p| exp(2 tau^2/T^2)).

    Much greater than 1 means the Stark-shift-induced crossing is traversed
    adiabatically.  tau = 0 removes the crossing; the ratio is then reported
    as +inf.
    """
    if tau == 0.0:
        return math.inf
    return (omega0 * width) ** 2 / (abs(tau) * abs(delta_p)
                                    * math.exp(2.0 * (tau / width) ** 2))


def lz_exponent(eta: float, omega0: float, delta_p: float, alpha: float) -> float:
    """Landau-Zener exponent eta^2 omega0^4 / (2 delta_p^2 |alpha|)."""
    if alpha == 0.0:
        raise ValueError("chirp rate must be nonzero")
    if delta_p == 0.0:
        raise ValueError("pump detuning must be nonzero")
    return (eta * omega0 ** 2 / delta_p) ** 2 / (2.0 * abs(alpha))


def lz_prediction(eta: float, omega0: float, delta_p: float, alpha: float,
                  p_init: float) -> float:
    """Population transferred by one chirped sweep: p_init (1 - e^{-pi L})."""
    return p_init * (1.0 - math.exp(-math.pi * lz_exponent(eta, omega0, delta_p, alpha)))


def chain_estimate(epsilon_step, populations) -> float:
    """Ground-state population after the chain, sum_K P[K] * eps^K.

    populations[K] is the initial population of rotational level K, which
    needs K sequential transfers each succeeding with probability eps.
    """
    if not 0.0 <= epsilon_step <= 1.0:
        raise ValueError(f"epsilon_step {epsilon_step} outside [0, 1]")
    p = np.asarray(populations, dtype=float)
    if abs(p.sum() - 1.0) > 1e-6:
        raise ValueError("populations must be normalized")
    return float(np.sum(p * epsilon_step ** np.arange(len(p))))


def populated_levels(kt_over_b: float, p_cut: float) -> int:
    """Number of levels with population above p_cut, ceil(sqrt(-ln(2p) kT/B))."""
    if not 0.0 < p_cut < 0.5:
        raise ValueError(f"p_cut {p_cut} outside (0, 0.5)")
    if not kt_over_b > 0.0:
        raise ValueError(f"kT/B must be > 0, got {kt_over_b}")
    return math.ceil(math.sqrt(-math.log(2.0 * p_cut) * kt_over_b))
