"""Adaptive propagation of the density matrix through a pulse schedule."""
from __future__ import annotations

import time as _time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _engine
from .basis import SystemSpec
from .dynamics import DensityState
from .pulses import PulseSchedule

TRUNCATION_LIMIT = 1e-3   # population allowed at the motional cutoff


class IntegrationError(RuntimeError):
    """Raised when a run cannot be completed to the requested accuracy."""

    def __init__(self, message: str, last_time: float):
        super().__init__(f"{message} (last good time t = {last_time:g})")
        self.last_time = last_time


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_step: float = 0.05
    sample_interval: float | None = None   # default: pulse width / 20
    hermitize_every_step: bool = True

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be > 0")
        if not self.max_step > 0:
            raise ValueError("max_step must be > 0")
        if self.sample_interval is not None and not self.sample_interval > 0:
            raise ValueError("sample_interval must be > 0")


@dataclass
class SimResult:
    """Sampled trajectory plus end-of-run metrics for one simulation."""

    times: np.ndarray            # (S,) sample times
    populations: np.ndarray      # (S, D) populations at the sample times
    final_state: DensityState
    efficiency: float            # total rotational ground-state population
    loss_u: float                # total population of the uncoupled sink
    truncation_flag: bool
    step_count: int
    wall_time: float
    per_cycle: tuple = field(default_factory=tuple)

    @property
    def samples(self) -> list:
        return list(zip(self.times, self.populations))


def _sample_times(t_start: float, t_end: float, interval: float) -> np.ndarray:
    n = max(1, int(np.floor((t_end - t_start) / interval)))
    pts = t_start + interval * np.arange(1, n + 1)
    if pts[-1] < t_end - 1e-9 * (abs(t_end) + 1.0):
        pts = np.append(pts, t_end)
    else:
        pts[-1] = t_end
    return pts


def run(spec: SystemSpec, schedule: PulseSchedule, rho0: DensityState,
        cfg: IntegratorConfig | None = None) -> SimResult:
    """Integrate the master equation over the schedule window.

    rho0 is taken as the state at the window start regardless of its
    timestamp.  Identical inputs produce identical sample times and
    populations within one build.
    """
    from .analysis import efficiency, loss_u   # local import to avoid a cycle

    cfg = cfg or IntegratorConfig()
    tab = _engine.tableau(spec, schedule)
    if rho0.matrix.shape[0] != tab.dim:
        raise ValueError(
            f"initial state dimension {rho0.matrix.shape[0]} does not match model "
            f"dimension {tab.dim}"
        )
    interval = cfg.sample_interval
    if interval is None:
        interval = schedule.max_width / 20.0

    t = schedule.t_start
    rho = np.array(rho0.matrix, dtype=complex, order="C")
    targets = _sample_times(schedule.t_start, schedule.t_end, interval)
    times = [t]
    # rho is mutated in place: snapshot copies, not views
    pops = [np.diag(rho).real.copy()]
    h = min(cfg.max_step, interval)
    steps = 0
    started = _time.perf_counter()
    for target in targets:
        t, h, ns, _, status = _engine.advance(
            tab, rho, t, target, h, cfg.rel_tol, cfg.abs_tol, cfg.max_step,
            cfg.hermitize_every_step)
        steps += ns
        if status == _engine.STATUS_UNDERFLOW:
            raise IntegrationError(
                "step size underflow: region too stiff for the requested tolerances", t)
        if status == _engine.STATUS_TRACE:
            raise IntegrationError(
                f"trace drifted beyond {_engine.TRACE_ABORT} during integration", t)
        times.append(t)
        pops.append(np.diag(rho).real.copy())
    wall = _time.perf_counter() - started

    final = DensityState(matrix=rho, time=schedule.t_end, basis=rho0.basis)
    cutoff_pop = float(sum(final.populations()[rho0.basis.index(lab, rho0.basis.n_max)]
                           for lab in rho0.basis.internal_labels))
    truncated = cutoff_pop > TRUNCATION_LIMIT
    if truncated:
        warnings.warn(
            f"population {cutoff_pop:.2e} at the motional cutoff n_max = "
            f"{rho0.basis.n_max}; increase n_max",
            RuntimeWarning,
            stacklevel=2,
        )
    eff = efficiency(final)
    return SimResult(
        times=np.array(times),
        populations=np.array(pops),
        final_state=final,
        efficiency=eff,
        loss_u=loss_u(final),
        truncation_flag=truncated,
        step_count=steps,
        wall_time=wall,
        per_cycle=(eff,),
    )


def run_cycles(spec: SystemSpec, schedule: PulseSchedule, rho0: DensityState,
               cfg: IntegratorConfig | None = None, cycles: int = 1) -> SimResult:
    """Apply the schedule repeatedly with a motional reset between repeats.

    Sample times of cycle c are shifted by c*(t_end - t_start) so the
    concatenated trajectory is monotone in time.
    """
    from .dynamics import motional_reset

    if cycles < 1:
        raise ValueError(f"cycles must be >= 1, got {cycles}")
    span = schedule.t_end - schedule.t_start
    state = rho0
    per_cycle = []
    all_times, all_pops = [], []
    steps = 0
    wall = 0.0
    truncated = False
    result = None
    for c in range(cycles):
        if c > 0:
            state = motional_reset(result.final_state)
        result = run(spec, schedule, state, cfg)
        per_cycle.append(result.efficiency)
        all_times.append(result.times + c * span)
        all_pops.append(result.populations)
        steps += result.step_count
        wall += result.wall_time
        truncated = truncated or result.truncation_flag
    return SimResult(
        times=np.concatenate(all_times),
        populations=np.concatenate(all_pops),
        final_state=result.final_state,
        efficiency=result.efficiency,
        loss_u=result.loss_u,
        truncation_flag=truncated,
        step_count=steps,
        wall_time=wall,
        per_cycle=tuple(per_cycle),
    )
