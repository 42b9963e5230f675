"""Closed-system evolution over a pulse schedule."""

import logging

import numpy as np

from ..qcore.spaces import Ket
from ..qcore.ops import expectation  # noqa: F401  (re-exported convenience)
from .schedule import PulseSchedule, pack_segment, EvolutionResult
from . import kernels
from .kernels import (advance_dp45, advance_gl4, STATUS_DONE)

log = logging.getLogger(__name__)

DEFAULT_POINTS = 400
# "auto" switches to the norm-preserving GL4 kernel once a segment spans this
# many cycles of its fastest declared phase
AUTO_GL4_CYCLES = 1e4


def output_times(total_duration, times=None, n_points=DEFAULT_POINTS):
    if times is not None:
        t = np.asarray(times, dtype=float)
        if t.ndim != 1 or len(t) < 1:
            raise ValueError("times must be a 1-d array")
        if np.any(np.diff(t) < 0):
            raise ValueError("times must be nondecreasing")
        if t[0] < -1e-15 or t[-1] > total_duration * (1 + 1e-12) + 1e-30:
            raise ValueError("times outside the schedule window")
        return t
    return np.linspace(0.0, total_duration, n_points)


def _pick_integrator(integrator, packed):
    if integrator in ("dp45", "gl4"):
        return integrator
    if integrator != "auto":
        raise ValueError(f"unknown integrator {integrator!r}")
    nu_max = np.max(np.abs(packed.nu)) if packed.n_rows else 0.0
    if nu_max > 0 and packed.duration * nu_max / (2 * np.pi) > AUTO_GL4_CYCLES:
        return "gl4"
    return "dp45"


class _ScheduleWalker:
    """Shared bookkeeping: segments, packing, pulses, output recording."""

    def __init__(self, schedule: PulseSchedule, include_nojump, gl_dt=None):
        self.schedule = schedule
        self.bounds = schedule.boundaries()
        self.packed = []
        t0 = 0.0
        for seg in schedule.segments:
            self.packed.append(pack_segment(seg, t0,
                                            include_nojump=include_nojump))
            t0 += seg.duration
        self.gl_dt = gl_dt

    def segment_index(self, t):
        # segment active at time t (left-closed; final boundary maps to last)
        i = int(np.searchsorted(self.bounds, t, side="right") - 1)
        return min(max(i, 0), len(self.packed) - 1)

    def breakpoints(self, times):
        pts = set(float(x) for x in times)
        pts.update(float(x) for x in self.bounds)
        pts.update(float(p.time) for p in self.schedule.instantaneous_pulses)
        return np.array(sorted(pts))


def evolve_schrodinger(schedule: PulseSchedule, psi0: Ket, times=None,
                       n_points=DEFAULT_POINTS, integrator="auto",
                       rtol=1e-9, atol=1e-11, gl_dt=None,
                       observables=None, store_states=False, backend=None,
                       nojump=False):
    """Schrodinger evolution; raises if any segment declares collapse channels.

    observables maps name -> f(t, amplitudes) -> value, evaluated at the
    output grid.  Norms are recorded at every grid point as the closedness
    diagnostic (no renormalization is ever applied).

    nojump=True admits channels and folds their -i/2 C'C into the generator:
    the deterministic conditional (no-jump) evolution, with decaying norm.
    """
    if not nojump:
        for seg in schedule.segments:
            if seg.channels:
                raise ValueError(
                    "closed evolution requested on a schedule with collapse "
                    "channels; use evolve_lindblad, quantum_jump_trajectory, "
                    "or nojump=True for the conditional evolution"
                )
    if psi0.space.dim != schedule.space.dim:
        raise ValueError("initial state dimension mismatch")

    walker = _ScheduleWalker(schedule, include_nojump=nojump)
    t_out = output_times(schedule.total_duration, times, n_points)
    bps = walker.breakpoints(t_out)
    out_set = {float(x) for x in t_out}
    pulse_at = {}
    for p in schedule.instantaneous_pulses:
        pulse_at.setdefault(float(p.time), []).append(p)

    y = psi0.amps.astype(np.complex128).copy()
    observables = observables or {}
    obs_out = {k: [] for k in observables}
    norms = []
    states = [] if store_states else None
    nsteps_total = 0

    def record(t):
        n = float(np.linalg.norm(y))
        norms.append(n)
        for k, f in observables.items():
            obs_out[k].append(f(t, y))
        if store_states:
            states.append(Ket(schedule.space, y.copy(), normalize=False))

    t = bps[0]
    if t in out_set:
        # pulses scheduled exactly at t=0 fire before the first sample
        for p in pulse_at.get(float(t), []):
            y = p.unitary.csr() @ y
        record(t)
        pulse_at.pop(float(t), None)
    for tb in bps[1:]:
        if tb <= t:
            continue
        # advance t -> tb, possibly across one segment at a time
        while t < tb - 1e-12 * (abs(tb) + 1):
            si = walker.segment_index(t)
            seg_end = walker.bounds[si + 1]
            target = min(tb, seg_end)
            packed = walker.packed[si]
            kind = _pick_integrator(integrator, packed)
            if kind == "gl4":
                h = gl_dt if gl_dt is not None else packed.h_cap
                status, t_r, _, ns = advance_gl4(packed, y, t, target, h,
                                                 backend=backend)
            else:
                status, t_r, _, ns = advance_dp45(packed, y, t, target,
                                                  rtol=rtol, atol=atol,
                                                  backend=backend)
            nsteps_total += ns
            if status != STATUS_DONE:
                raise RuntimeError(
                    f"integrator failed with status {status} at t={t_r:g}"
                )
            t = target
        for p in pulse_at.get(float(tb), []):
            y = p.unitary.csr() @ y
        if float(tb) in out_set:
            record(tb)

    return EvolutionResult(
        times=t_out,
        observables={k: np.asarray(v) for k, v in obs_out.items()},
        norms=np.asarray(norms),
        states=states,
        nsteps=nsteps_total,
    )


def op_observable(op):
    """Wrap an Operator as an observable callable <psi|A|psi> (raw state)."""
    A = op.csr()

    def f(t, y):
        return complex(np.vdot(y, A @ y))

    return f


def real_op_observable(op):
    A = op.csr()

    def f(t, y):
        return float(np.vdot(y, A @ y).real)

    return f
