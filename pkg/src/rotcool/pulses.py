"""Gaussian pulse envelopes, detuning programs and preset pulse schedules.

A schedule is an ordered list of Raman steps.  Each step drives one
(upper J, lower J) transition with a pump and a Stokes pulse; the pump
peaks at 3*tau + k*tau_tilde and the Stokes at tau + k*tau_tilde, where
k counts the step position in the chain (j_max - upper J), so consecutive
steps are separated by tau_tilde and the Stokes precedes the pump by 2*tau.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .basis import SystemSpec

CONSTANT = "constant"
CHIRP = "chirp"

SCHEMES = ("stirap", "scrap", "carp")

# envelopes fall below 2e-11 of peak beyond 5 widths; the schedule window
# pads the extreme pulse centers by this factor
WINDOW_PAD_WIDTHS = 5.0


@dataclass(frozen=True)
class PulseEnvelope:
    """Gaussian envelope omega0 * exp(-((t - center)/width)^2)."""

    omega0: float
    center: float
    width: float

    def __post_init__(self):
        if self.omega0 < 0:
            raise ValueError(f"peak Rabi frequency must be >= 0, got {self.omega0}")
        if not self.width > 0:
            raise ValueError(f"pulse width must be > 0, got {self.width}")


def envelope_at(env: PulseEnvelope, t: float) -> float:
    """Rabi frequency of the envelope at time t."""
    return env.omega0 * math.exp(-(((t - env.center) / env.width) ** 2))


@dataclass(frozen=True)
class DetuningProgram:
    """Constant detuning, or a linear chirp base - alpha*(t - reference)."""

    kind: str
    base: float
    alpha: float = 0.0
    reference: float = 0.0

    def __post_init__(self):
        if self.kind not in (CONSTANT, CHIRP):
            raise ValueError(f"unknown detuning program kind {self.kind!r}")


def detuning_at(prog: DetuningProgram, t: float) -> float:
    """Detuning at time t (units of nu)."""
    if prog.kind == CONSTANT:
        return prog.base
    return prog.base - prog.alpha * (t - prog.reference)


@dataclass(frozen=True)
class RamanStep:
    """One pump/Stokes pulse pair driving |upper,n> -> |lower,n+1>."""

    upper: int
    lower: int
    pump_env: PulseEnvelope
    pump_det: DetuningProgram
    stokes_env: PulseEnvelope
    stokes_det: DetuningProgram


@dataclass(frozen=True)
class PulseSchedule:
    """Full control program: ordered steps plus the simulation window."""

    steps: tuple[RamanStep, ...]
    t_start: float
    t_end: float

    def __post_init__(self):
        if not self.steps:
            raise ValueError("schedule needs at least one step")
        centers = [s.pump_env.center for s in self.steps]
        if any(b < a for a, b in zip(centers, centers[1:])):
            raise ValueError("steps must be ordered by pump center")
        for s in self.steps:
            for env in (s.pump_env, s.stokes_env):
                if not (self.t_start <= env.center - WINDOW_PAD_WIDTHS * env.width
                        and env.center + WINDOW_PAD_WIDTHS * env.width <= self.t_end):
                    raise ValueError("window must contain all pulse centers +- 5 widths")

    @property
    def max_width(self) -> float:
        return max(s.pump_env.width for s in self.steps)


@dataclass(frozen=True)
class PulseParams:
    """Scalar knobs shared by the preset schedules.

    ``omega0_s`` defaults to ``omega0_p`` (a single peak Rabi frequency for
    both pulses), ``tau_tilde`` to six pulse widths (sequential steps without
    overlap) and ``delta_s`` to ``delta_p``.
    """

    omega0_p: float
    width: float
    tau: float
    omega0_s: float | None = None
    tau_tilde: float | None = None
    delta_p: float = 0.0
    delta_s: float | None = None
    alpha: float = 0.0

    def resolved(self) -> "PulseParams":
        omega0_s = self.omega0_p if self.omega0_s is None else self.omega0_s
        tau_tilde = 6.0 * self.width if self.tau_tilde is None else self.tau_tilde
        delta_s = self.delta_p if self.delta_s is None else self.delta_s
        return PulseParams(self.omega0_p, self.width, self.tau, omega0_s,
                           tau_tilde, self.delta_p, delta_s, self.alpha)


def make_schedule(scheme: str, spec: SystemSpec, params: PulseParams) -> PulseSchedule:
    """Build a preset schedule over the spec's Raman chain.

    stirap: delayed resonant pulses (two-photon resonance when
    delta_p == delta_s).  scrap: delayed far-detuned pulses with equal
    constant detunings.  carp: simultaneous pulses (tau = 0) with the Stokes
    detuning chirped through the pump detuning at each step's time origin.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if not params.width > 0:
        raise ValueError(f"pulse width must be > 0, got {params.width}")
    if scheme == "carp" and params.tau != 0:
        raise ValueError(f"carp requires tau = 0, got {params.tau}")
    p = params.resolved()

    steps = []
    for upper, lower in spec.chain:
        k = spec.j_max - upper
        offset = k * p.tau_tilde
        pump_env = PulseEnvelope(p.omega0_p, 3.0 * p.tau + offset, p.width)
        stokes_env = PulseEnvelope(p.omega0_s, p.tau + offset, p.width)
        pump_det = DetuningProgram(CONSTANT, p.delta_p)
        if scheme == "carp":
            stokes_det = DetuningProgram(CHIRP, p.delta_s, alpha=p.alpha, reference=offset)
        else:
            stokes_det = DetuningProgram(CONSTANT, p.delta_s)
        steps.append(RamanStep(upper, lower, pump_env, pump_det, stokes_env, stokes_det))
    steps.sort(key=lambda s: s.pump_env.center)

    centers = [e.center for s in steps for e in (s.pump_env, s.stokes_env)]
    t_start = min(centers) - WINDOW_PAD_WIDTHS * p.width
    t_end = max(centers) + WINDOW_PAD_WIDTHS * p.width
    return PulseSchedule(steps=tuple(steps), t_start=t_start, t_end=t_end)
