"""Density-matrix state type, Hamiltonian/master-equation assembly, motional reset.

The master equation is

    d(rho)/dt = -i[H(t), rho]
                + sum_J Gamma_J (s-_J rho s+_J - {s+_J s-_J, rho}/2)
                + Gamma_u (s-_u rho s+_u - {s+_u s-_u, rho}/2)

with s+_x = |e><x| acting identically on every motional level, so spontaneous
decay never changes the motional quantum number and the uncoupled level u is
a pure sink.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _engine
from .basis import BasisIndex, SystemSpec
from .pulses import PulseSchedule

HERMITICITY_TOL = 1e-8
TRACE_TOL = 1e-8
EIG_FLOOR = -1e-6


@dataclass(frozen=True)
class DensityState:
    """Hermitian density matrix over a basis, tagged with a timestamp.

    The matrix is copied and exactly re-symmetrized on construction; trace
    must be 1 within 1e-8.  Negative eigenvalues beyond -1e-6 are reported
    as a warning but never clamped.
    """

    matrix: np.ndarray
    time: float
    basis: BasisIndex = field(compare=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.basis.dim, self.basis.dim):
            raise ValueError(
                f"matrix shape {m.shape} does not match basis dimension {self.basis.dim}"
            )
        asym = np.max(np.abs(m - m.conj().T))
        if asym > HERMITICITY_TOL:
            raise ValueError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
        m = 0.5 * (m + m.conj().T)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr!r} deviates from 1 beyond {TRACE_TOL}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo < EIG_FLOOR:
            warnings.warn(
                f"density matrix has eigenvalue {lo:.3e} below {EIG_FLOOR}",
                RuntimeWarning,
                stacklevel=2,
            )

    def populations(self) -> np.ndarray:
        """Real diagonal of the matrix (length D)."""
        return np.real(np.diag(self.matrix))


def diagonal_state(basis: BasisIndex, entries: dict, time: float = 0.0) -> DensityState:
    """Diagonal density matrix from {(label, n): population} entries."""
    m = np.zeros((basis.dim, basis.dim), dtype=complex)
    for (label, n), p in entries.items():
        m[basis.index(label, n), basis.index(label, n)] = p
    return DensityState(matrix=m, time=time, basis=basis)


def hamiltonian_at(spec: SystemSpec, schedule: PulseSchedule, t: float) -> np.ndarray:
    """Full Hamiltonian matrix at time t inside the schedule window."""
    if not schedule.t_start <= t <= schedule.t_end:
        raise ValueError(
            f"t = {t} outside schedule window [{schedule.t_start}, {schedule.t_end}]"
        )
    return _engine.build_h(_engine.tableau(spec, schedule), t)


def master_rhs(spec: SystemSpec, schedule: PulseSchedule,
               rho: DensityState, t: float) -> np.ndarray:
    """d(rho)/dt of the master equation at time t."""
    tab = _engine.tableau(spec, schedule)
    if rho.matrix.shape[0] != tab.dim:
        raise ValueError(
            f"state dimension {rho.matrix.shape[0]} does not match model dimension {tab.dim}"
        )
    return _engine.rhs(tab, t, rho.matrix)


def motional_reset(rho: DensityState) -> DensityState:
    """Project all motional population of each internal label onto n = 0.

    Models ideal sympathetic re-cooling of the ion's motion between pulse
    sequences: per-label populations are preserved exactly, every coherence
    is erased.
    """
    basis = rho.basis
    pops = rho.populations()
    m = np.zeros_like(rho.matrix)
    for label in basis.internal_labels:
        blk = basis.block(label)
        m[blk.start, blk.start] = pops[blk].sum()
    return DensityState(matrix=m, time=rho.time, basis=basis)
