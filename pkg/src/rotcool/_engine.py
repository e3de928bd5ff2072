"""Precomputed operator tables and the adaptive integration core.

The Hamiltonian is assembled per evaluation time as

    H(t) = nu a^dag a  +  sum_m w_m(t) C_m  +  active-step detuning diagonal

where the C_m are the static carrier+sideband coupling matrices of each
pulse (pump and Stokes of every step) and w_m(t) their Gaussian envelopes.
The per-step detuning terms (on the shared e level and on the step's lower
rotational level) are applied only inside the step's activity window: the
windows partition the schedule at the midpoints between consecutive pump
centers.  With the default sequential schedules at most one pulse pair is
non-negligible inside each window, so this matches the model in the regime
it is used in, while keeping the detuning bookkeeping well defined when the
chain has several steps with independent detuning programs.

The two-photon bookkeeping places the active step's lower level at
delta_p - delta_s - nu, which makes |upper, n> and |lower, n+1> degenerate
exactly at two-photon resonance (delta_p == delta_s), conserving J + n.

Two interchangeable stepper implementations are provided: a vectorized
numpy reference and a numba-compiled twin of the same algorithm (Dormand-
Prince 5(4), FSAL, error norm and step control as in standard embedded RK
codes).  Within one build both are deterministic; the numba path is used
when available.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import NU, EXCITED, UNCOUPLED, BasisIndex, SystemSpec, build_basis, ladder_ops, sigma_ops
from .pulses import CHIRP, PulseSchedule

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap


TRACE_ABORT = 1e-6   # |tr(rho) - 1| beyond this aborts a run
STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_TRACE = 2

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920,
                                -17253 / 339200, 22 / 525, -1 / 40)


@dataclass
class Tableau:
    """Static arrays describing one (spec, schedule) pair."""

    dim: int
    nlev: int
    e0: int                    # flat start index of the e block
    diag0: np.ndarray          # (D,) nu * n
    coup_dense: np.ndarray     # (M, D, D) float64, for the numpy path
    cptr: np.ndarray           # (M+1,) int64 sparse offsets
    cidx: np.ndarray           # (nnz,) int64 flat indices into H
    cval: np.ndarray           # (nnz,) float64
    amp: np.ndarray            # (M,) envelope peaks
    cen: np.ndarray            # (M,) envelope centers
    wid: np.ndarray            # (M,) envelope widths
    dchirp: np.ndarray         # (K, 2) 1.0 where the program is a chirp
    dbase: np.ndarray          # (K, 2)
    dalpha: np.ndarray         # (K, 2)
    dref: np.ndarray           # (K, 2)
    bounds: np.ndarray         # (K-1,) activity-window boundaries
    lower0: np.ndarray         # (K,) flat start index of each step's lower block
    feed0: np.ndarray          # block starts fed by decay (J levels then u)
    feedg: np.ndarray          # matching rates
    gtot: float                # total decay rate out of e


def _coupling_matrix(basis: BasisIndex, label, eta: float) -> np.ndarray:
    """Carrier plus eta-scaled red/blue sideband couplings of one pulse."""
    raise_op, _ = sigma_ops(basis, label)
    a, ad = ladder_ops(basis)
    carrier = raise_op + raise_op.T
    red = raise_op @ a
    blue = raise_op @ ad
    return 0.5 * (carrier + eta * (red + red.T + blue + blue.T))


def _build_tableau(spec: SystemSpec, schedule: PulseSchedule) -> Tableau:
    basis = build_basis(spec)
    D, nlev = basis.dim, basis.n_levels
    steps = schedule.steps

    mats, amp, cen, wid = [], [], [], []
    for step in steps:
        for label, env in ((step.upper, step.pump_env), (step.lower, step.stokes_env)):
            mats.append(_coupling_matrix(basis, label, spec.eta))
            amp.append(env.omega0)
            cen.append(env.center)
            wid.append(env.width)
    coup_dense = np.ascontiguousarray(np.stack(mats))

    cptr = [0]
    cidx, cval = [], []
    for m in mats:
        flat = m.reshape(-1)
        nz = np.nonzero(flat)[0]
        cidx.extend(nz.tolist())
        cval.extend(flat[nz].tolist())
        cptr.append(len(cidx))

    K = len(steps)
    dchirp = np.zeros((K, 2))
    dbase = np.zeros((K, 2))
    dalpha = np.zeros((K, 2))
    dref = np.zeros((K, 2))
    for k, step in enumerate(steps):
        for col, prog in enumerate((step.pump_det, step.stokes_det)):
            dchirp[k, col] = 1.0 if prog.kind == CHIRP else 0.0
            dbase[k, col] = prog.base
            dalpha[k, col] = prog.alpha
            dref[k, col] = prog.reference

    pump_centers = np.array([s.pump_env.center for s in steps])
    bounds = 0.5 * (pump_centers[:-1] + pump_centers[1:])
    lower0 = np.array([basis.block(s.lower).start for s in steps], dtype=np.int64)

    feed0 = np.array([basis.block(j).start for j in range(spec.j_max + 1)]
                     + [basis.block(UNCOUPLED).start], dtype=np.int64)
    feedg = np.array([spec.gamma_j] * (spec.j_max + 1) + [spec.gamma_u])

    return Tableau(
        dim=D,
        nlev=nlev,
        e0=basis.block(EXCITED).start,
        diag0=NU * np.tile(np.arange(nlev, dtype=float), basis.n_internal),
        coup_dense=coup_dense,
        cptr=np.array(cptr, dtype=np.int64),
        cidx=np.array(cidx, dtype=np.int64),
        cval=np.array(cval),
        amp=np.array(amp),
        cen=np.array(cen),
        wid=np.array(wid),
        dchirp=dchirp,
        dbase=dbase,
        dalpha=dalpha,
        dref=dref,
        bounds=bounds,
        lower0=lower0,
        feed0=feed0,
        feedg=feedg,
        gtot=float(feedg.sum()),
    )


@lru_cache(maxsize=32)
def tableau(spec: SystemSpec, schedule: PulseSchedule) -> Tableau:
    return _build_tableau(spec, schedule)


def active_step(tab: Tableau, t: float) -> int:
    """Index of the step whose activity window contains t."""
    return int(np.searchsorted(tab.bounds, t, side="right"))


def step_detunings(tab: Tableau, k: int, t: float) -> tuple[float, float]:
    """Pump and Stokes detunings of step k at time t."""
    dp = tab.dbase[k, 0] - tab.dchirp[k, 0] * tab.dalpha[k, 0] * (t - tab.dref[k, 0])
    ds = tab.dbase[k, 1] - tab.dchirp[k, 1] * tab.dalpha[k, 1] * (t - tab.dref[k, 1])
    return dp, ds


def build_h(tab: Tableau, t: float) -> np.ndarray:
    """Dense Hermitian Hamiltonian at time t (numpy path)."""
    w = tab.amp * np.exp(-(((t - tab.cen) / tab.wid) ** 2))
    H = np.tensordot(w, tab.coup_dense, axes=1).astype(complex)
    d = tab.diag0.copy()
    k = active_step(tab, t)
    dp, ds = step_detunings(tab, k, t)
    nlev = tab.nlev
    d[tab.e0:tab.e0 + nlev] += dp
    l0 = tab.lower0[k]
    d[l0:l0 + nlev] += dp - ds - NU
    H[np.diag_indices_from(H)] += d
    return H


def rhs(tab: Tableau, t: float, rho: np.ndarray) -> np.ndarray:
    """Master-equation right-hand side d(rho)/dt (numpy path)."""
    H = build_h(tab, t)
    A = H @ rho
    out = -1j * (A - A.conj().T)
    nlev = tab.nlev
    e_sl = slice(tab.e0, tab.e0 + nlev)
    hg = 0.5 * tab.gtot
    out[e_sl, :] -= hg * rho[e_sl, :]
    out[:, e_sl] -= hg * rho[:, e_sl]
    ee = rho[e_sl, e_sl]
    for o, g in zip(tab.feed0, tab.feedg):
        out[o:o + nlev, o:o + nlev] += g * ee
    return out


# ---------------------------------------------------------------------------
# numba core

@njit(cache=True)
def _rhs_nb(t, rho, out, H, cptr, cidx, cval, amp, cen, wid,
            dchirp, dbase, dalpha, dref, bounds, lower0,
            e0, nlev, diag0, feed0, feedg, gtot, nu):
    D = rho.shape[0]
    Hf = H.reshape(D * D)
    for p in range(D * D):
        Hf[p] = 0.0
    M = amp.shape[0]
    for m in range(M):
        x = (t - cen[m]) / wid[m]
        w = amp[m] * math.exp(-x * x)
        for q in range(cptr[m], cptr[m + 1]):
            Hf[cidx[q]] += w * cval[q]
    for i in range(D):
        Hf[i * D + i] += diag0[i]
    k = 0
    for b in range(bounds.shape[0]):
        if t >= bounds[b]:
            k = b + 1
        else:
            break
    dp = dbase[k, 0] - dchirp[k, 0] * dalpha[k, 0] * (t - dref[k, 0])
    ds = dbase[k, 1] - dchirp[k, 1] * dalpha[k, 1] * (t - dref[k, 1])
    l0 = lower0[k]
    for n in range(nlev):
        Hf[(e0 + n) * D + (e0 + n)] += dp
        Hf[(l0 + n) * D + (l0 + n)] += dp - ds - nu
    A = np.dot(H, rho)
    for i in range(D):
        for j in range(D):
            out[i, j] = -1j * (A[i, j] - np.conj(A[j, i]))
    hg = 0.5 * gtot
    for i in range(e0, e0 + nlev):
        for j in range(D):
            out[i, j] -= hg * rho[i, j]
            out[j, i] -= hg * rho[j, i]
    for b in range(feed0.shape[0]):
        g = feedg[b]
        o = feed0[b]
        for i in range(nlev):
            for j in range(nlev):
                out[o + i, o + j] += g * rho[e0 + i, e0 + j]


@njit(cache=True)
def _advance_nb(rho, t0, t1, h0, rtol, atol, max_step, hermitize,
                cptr, cidx, cval, amp, cen, wid,
                dchirp, dbase, dalpha, dref, bounds, lower0,
                e0, nlev, diag0, feed0, feedg, gtot, nu):
    """Advance rho in place from t0 to t1; returns (t, h, nsteps, nrej, status)."""
    D = rho.shape[0]
    DD = D * D
    k = np.empty((7, DD), np.complex128)
    y = np.empty(DD, np.complex128)
    H = np.empty((D, D), np.complex128)
    rf = rho.reshape(DD)
    y2 = y.reshape(D, D)

    _rhs_nb(t0, rho, k[0].reshape(D, D), H, cptr, cidx, cval, amp, cen, wid,
            dchirp, dbase, dalpha, dref, bounds, lower0,
            e0, nlev, diag0, feed0, feedg, gtot, nu)
    t = t0
    h = h0
    nsteps = 0
    nrej = 0
    rejected = False
    margin = 1e-12 * (1.0 + abs(t1))
    while t < t1 - margin:
        if h > max_step:
            h = max_step
        if t + h > t1:
            h = t1 - t
        if h < 1e-13 * (1.0 + abs(t)):
            return t, h, nsteps, nrej, STATUS_UNDERFLOW

        for p in range(DD):
            y[p] = rf[p] + h * (_A21 * k[0, p])
        _rhs_nb(t + _C2 * h, y2, k[1].reshape(D, D), H, cptr, cidx, cval, amp, cen,
                wid, dchirp, dbase, dalpha, dref, bounds, lower0,
                e0, nlev, diag0, feed0, feedg, gtot, nu)
        for p in range(DD):
            y[p] = rf[p] + h * (_A31 * k[0, p] + _A32 * k[1, p])
        _rhs_nb(t + _C3 * h, y2, k[2].reshape(D, D), H, cptr, cidx, cval, amp, cen,
                wid, dchirp, dbase, dalpha, dref, bounds, lower0,
                e0, nlev, diag0, feed0, feedg, gtot, nu)
        for p in range(DD):
            y[p] = rf[p] + h * (_A41 * k[0, p] + _A42 * k[1, p] + _A43 * k[2, p])
        _rhs_nb(t + _C4 * h, y2, k[3].reshape(D, D), H, cptr, cidx, cval, amp, cen,
                wid, dchirp, dbase, dalpha, dref, bounds, lower0,
                e0, nlev, diag0, feed0, feedg, gtot, nu)
        for p in range(DD):
            y[p] = rf[p] + h * (_A51 * k[0, p] + _A52 * k[1, p] + _A53 * k[2, p]
                                + _A54 * k[3, p])
        _rhs_nb(t + _C5 * h, y2, k[4].reshape(D, D), H, cptr, cidx, cval, amp, cen,
                wid, dchirp, dbase, dalpha, dref, bounds, lower0,
                e0, nlev, diag0, feed0, feedg, gtot, nu)
        for p in range(DD):
            y[p] = rf[p] + h * (_A61 * k[0, p] + _A62 * k[1, p] + _A63 * k[2, p]
                                + _A64 * k[3, p] + _A65 * k[4, p])
        _rhs_nb(t + h, y2, k[5].reshape(D, D), H, cptr, cidx, cval, amp, cen,
                wid, dchirp, dbase, dalpha, dref, bounds, lower0,
                e0, nlev, diag0, feed0, feedg, gtot, nu)
        for p in range(DD):
            y[p] = rf[p] + h * (_B1 * k[0, p] + _B3 * k[2, p] + _B4 * k[3, p]
                                + _B5 * k[4, p] + _B6 * k[5, p])
        if hermitize:
            for i in range(D):
                for j in range(i, D):
                    v = 0.5 * (y2[i, j] + np.conj(y2[j, i]))
                    y2[i, j] = v
                    y2[j, i] = np.conj(v)
        _rhs_nb(t + h, y2, k[6].reshape(D, D), H, cptr, cidx, cval, amp, cen,
                wid, dchirp, dbase, dalpha, dref, bounds, lower0,
                e0, nlev, diag0, feed0, feedg, gtot, nu)

        errsum = 0.0
        for p in range(DD):
            e = h * (_E1 * k[0, p] + _E3 * k[2, p] + _E4 * k[3, p]
                     + _E5 * k[4, p] + _E6 * k[5, p] + _E7 * k[6, p])
            ay = abs(y[p])
            ar = abs(rf[p])
            sc = atol + rtol * (ay if ay > ar else ar)
            q = abs(e) / sc
            errsum += q * q
        enorm = math.sqrt(errsum / DD)

        if enorm <= 1.0:
            t = t + h
            for p in range(DD):
                rf[p] = y[p]
                k[0, p] = k[6, p]
            nsteps += 1
            tr = 0.0
            for i in range(D):
                tr += y2[i, i].real
            if abs(tr - 1.0) > TRACE_ABORT:
                return t, h, nsteps, nrej, STATUS_TRACE
            if enorm == 0.0:
                fac = 10.0
            else:
                fac = 0.9 * enorm ** -0.2
                if fac > 10.0:
                    fac = 10.0
            if rejected and fac > 1.0:
                fac = 1.0
            h *= fac
            rejected = False
        else:
            nrej += 1
            rejected = True
            fac = 0.9 * enorm ** -0.2
            if fac < 0.2:
                fac = 0.2
            h *= fac
    return t1, h, nsteps, nrej, STATUS_OK


# ---------------------------------------------------------------------------
# numpy twin of the stepper (reference implementation / fallback)

def _advance_np(tab: Tableau, rho, t0, t1, h0, rtol, atol, max_step, hermitize):
    t = t0
    h = h0
    nsteps = nrej = 0
    rejected = False
    k = [None] * 7
    k[0] = rhs(tab, t, rho)
    margin = 1e-12 * (1.0 + abs(t1))
    while t < t1 - margin:
        h = min(h, max_step, t1 - t)
        if h < 1e-13 * (1.0 + abs(t)):
            return t, h, nsteps, nrej, STATUS_UNDERFLOW
        y = rho + (h * _A21) * k[0]
        k[1] = rhs(tab, t + _C2 * h, y)
        y = rho + h * (_A31 * k[0] + _A32 * k[1])
        k[2] = rhs(tab, t + _C3 * h, y)
        y = rho + h * (_A41 * k[0] + _A42 * k[1] + _A43 * k[2])
        k[3] = rhs(tab, t + _C4 * h, y)
        y = rho + h * (_A51 * k[0] + _A52 * k[1] + _A53 * k[2] + _A54 * k[3])
        k[4] = rhs(tab, t + _C5 * h, y)
        y = rho + h * (_A61 * k[0] + _A62 * k[1] + _A63 * k[2] + _A64 * k[3]
                       + _A65 * k[4])
        k[5] = rhs(tab, t + h, y)
        y = rho + h * (_B1 * k[0] + _B3 * k[2] + _B4 * k[3] + _B5 * k[4] + _B6 * k[5])
        if hermitize:
            y = 0.5 * (y + y.conj().T)
        k[6] = rhs(tab, t + h, y)
        err = h * (_E1 * k[0] + _E3 * k[2] + _E4 * k[3] + _E5 * k[4]
                   + _E6 * k[5] + _E7 * k[6])
        sc = atol + rtol * np.maximum(np.abs(rho), np.abs(y))
        enorm = math.sqrt(float(np.mean((np.abs(err) / sc) ** 2)))
        if enorm <= 1.0:
            t = t + h
            rho[...] = y
            k[0] = k[6]
            nsteps += 1
            tr = float(np.trace(y).real)
            if abs(tr - 1.0) > TRACE_ABORT:
                return t, h, nsteps, nrej, STATUS_TRACE
            fac = 10.0 if enorm == 0.0 else min(10.0, 0.9 * enorm ** -0.2)
            if rejected:
                fac = min(fac, 1.0)
            h *= fac
            rejected = False
        else:
            nrej += 1
            rejected = True
            h *= max(0.2, 0.9 * enorm ** -0.2)
    return t1, h, nsteps, nrej, STATUS_OK


def advance(tab: Tableau, rho, t0, t1, h0, rtol, atol, max_step, hermitize,
            use_numba=None):
    """Advance rho in place from t0 to t1 with one of the stepper twins."""
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba:
        return _advance_nb(
            rho, t0, t1, h0, rtol, atol, max_step, hermitize,
            tab.cptr, tab.cidx, tab.cval, tab.amp, tab.cen, tab.wid,
            tab.dchirp, tab.dbase, tab.dalpha, tab.dref, tab.bounds, tab.lower0,
            tab.e0, tab.nlev, tab.diag0, tab.feed0, tab.feedg, tab.gtot, NU)
    return _advance_np(tab, rho, t0, t1, h0, rtol, atol, max_step, hermitize)
