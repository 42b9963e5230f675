"""Monte-Carlo wave-function (quantum-jump) unravelling.

Between jumps the state evolves under H - (i/2) sum_q C_q†(t) C_q(t) (packed
with the no-jump part folded in).  A uniform draw r sets the next squared-norm
threshold; the integrator stops when ||psi||^2 crosses r, the crossing time
is bisected to 1e-6 relative step precision, a channel is selected with
probability proportional to <C†C>, the state collapses and renormalizes, and
a fresh r is drawn.  All randomness comes from numpy SeedSequence spawning,
so jump records are bit-identical for a given (seed, trajectory index,
config, backend).
"""

import logging

import numpy as np

from ..qcore.spaces import Ket
from .schedule import PulseSchedule, TrajectoryResult
from .schrodinger import _ScheduleWalker, output_times
from .kernels import (advance_dp45, advance_gl4, env_value_py,
                      STATUS_DONE, STATUS_THRESHOLD)

log = logging.getLogger(__name__)

BISECT_REL = 1e-6
# jump probabilities summing below this trip the all-zero error
WEIGHT_FLOOR = 1e-300


def trajectory_rng(seed, traj_index=0):
    """Deterministic per-trajectory generator: child traj_index of seed."""
    child = np.random.SeedSequence(seed).spawn(traj_index + 1)[traj_index]
    return np.random.default_rng(child)


def _advance(packed, y, t0, t1, threshold, integrator, rtol, atol, gl_dt,
             backend):
    if integrator == "gl4":
        h = gl_dt if gl_dt is not None else packed.h_cap
        return advance_gl4(packed, y, t0, t1, h, threshold=threshold,
                           backend=backend)
    return advance_dp45(packed, y, t0, t1, rtol=rtol, atol=atol,
                        threshold=threshold, backend=backend)


def quantum_jump_trajectory(schedule: PulseSchedule, psi0: Ket, seed,
                            traj_index=0, times=None, n_points=400,
                            integrator="dp45", rtol=1e-10, atol=1e-12,
                            gl_dt=None, observables=None, store_states=False,
                            backend=None):
    """One trajectory; observables are evaluated on the normalized state."""
    if psi0.space.dim != schedule.space.dim:
        raise ValueError("initial state dimension mismatch")
    has_channels = any(seg.channels for seg in schedule.segments)
    rng = trajectory_rng(seed, traj_index)

    walker = _ScheduleWalker(schedule, include_nojump=True)
    t_out = output_times(schedule.total_duration, times, n_points)
    bps = walker.breakpoints(t_out)
    out_set = {float(x) for x in t_out}
    pulse_at = {}
    for p in schedule.instantaneous_pulses:
        pulse_at.setdefault(float(p.time), []).append(p)

    y = psi0.amps.astype(np.complex128).copy()
    observables = observables or {}
    obs_out = {k: [] for k in observables}
    states = [] if store_states else None
    jumps = []
    norm_floor = 1.0
    nsteps_total = 0
    r = rng.random() if has_channels else -1.0

    def record(t):
        n = np.linalg.norm(y)
        yn = y / n if n > 0 else y
        for k, f in observables.items():
            obs_out[k].append(f(t, yn))
        if store_states:
            states.append(Ket(schedule.space, yn.copy(), normalize=False))

    def channel_weights(seg, packed, t):
        tau = t - packed.t0
        w = np.empty(len(seg.channels))
        for q, ch in enumerate(seg.channels):
            amp = ch.amp_scale * env_value_py(
                ch.envelope.kind, ch.envelope.p0, ch.envelope.p1,
                ch.envelope.p2, ch.envelope.p3, tau)
            Cy = ch.op.csr() @ y
            w[q] = (amp * amp) * np.vdot(Cy, Cy).real
        return w

    def do_jump(seg, packed, t):
        nonlocal y, r, norm_floor
        norm_floor = min(norm_floor, float(np.vdot(y, y).real))
        w = channel_weights(seg, packed, t)
        total = w.sum()
        if not np.isfinite(total) or total <= WEIGHT_FLOOR:
            raise RuntimeError(
                f"all-zero jump probabilities at t={t:g}: norm threshold "
                "crossed but no channel can fire (check channel envelopes)"
            )
        u = rng.random() * total
        q = int(np.searchsorted(np.cumsum(w), u, side="right"))
        q = min(q, len(w) - 1)
        tau = t - packed.t0
        ch = seg.channels[q]
        y = ch.op.csr() @ y
        n = np.linalg.norm(y)
        y = y / n
        jumps.append((float(t), q))
        r = rng.random()

    t = bps[0]
    if t in out_set:
        for p in pulse_at.get(float(t), []):
            y = p.unitary.csr() @ y
        record(t)
        pulse_at.pop(float(t), None)

    for tb in bps[1:]:
        if tb <= t:
            continue
        while t < tb - 1e-12 * (abs(tb) + 1):
            si = walker.segment_index(t)
            seg = schedule.segments[si]
            seg_end = walker.bounds[si + 1]
            target = min(tb, seg_end)
            packed = walker.packed[si]
            thr = r if seg.channels else -1.0
            status, t_r, h_r, ns = _advance(packed, y, t, target, thr,
                                            integrator, rtol, atol, gl_dt,
                                            backend)
            nsteps_total += ns
            if status == STATUS_DONE:
                t = target
            elif status == STATUS_THRESHOLD:
                # y holds the state at t_r (pre-crossing); bisect the step
                t_pre = t_r
                h_cross = min(h_r, target - t_pre)
                y_pre = y.copy()

                def norm2_after(s):
                    ys = y_pre.copy()
                    st, _, _, _ = _advance(packed, ys, t_pre, t_pre + s, -1.0,
                                           integrator, rtol, atol, gl_dt,
                                           backend)
                    if st != STATUS_DONE:
                        raise RuntimeError("bisection integration failed")
                    return float(np.vdot(ys, ys).real), ys

                lo, hi = 0.0, h_cross
                n2_hi, y_hi = norm2_after(hi)
                guard = 0
                while n2_hi >= r and guard < 60:
                    # crossing sits just past the reported step; extend a bit
                    hi = min(hi * 1.5 + 1e-300, target - t_pre)
                    n2_hi, y_hi = norm2_after(hi)
                    guard += 1
                    if hi >= target - t_pre and n2_hi >= r:
                        break
                if n2_hi >= r:
                    # threshold report was marginal; just continue evolving
                    y = y_hi
                    t = t_pre + hi
                    continue
                while hi - lo > BISECT_REL * h_cross:
                    mid = 0.5 * (lo + hi)
                    n2_mid, _ = norm2_after(mid)
                    if n2_mid < r:
                        hi = mid
                    else:
                        lo = mid
                n2_j, y_j = norm2_after(hi)
                y = y_j
                t_j = t_pre + hi
                do_jump(seg, packed, t_j)
                t = t_j
            else:
                raise RuntimeError(
                    f"integrator failed with status {status} at t={t_r:g}"
                )
        for p in pulse_at.get(float(tb), []):
            y = p.unitary.csr() @ y
        if float(tb) in out_set:
            record(tb)

    norm_floor = min(norm_floor, float(np.vdot(y, y).real))
    return TrajectoryResult(
        times=t_out,
        observables={k: np.asarray(v) for k, v in obs_out.items()},
        jumps=jumps,
        seed=int(seed),
        norm_floor=norm_floor,
        states=states,
        nsteps=nsteps_total,
    )


def ensemble_average(results):
    """Mean and standard error of ensemble observables.

    Returns (mean_dict, se_dict, n).  With a single trajectory the standard
    error is undefined; se_dict is None then (zero-variance guard).
    """
    if not results:
        raise ValueError("no trajectories to average")
    n = len(results)
    names = results[0].observables.keys()
    mean = {}
    se = {} if n > 1 else None
    for k in names:
        stack = np.stack([np.asarray(res.observables[k]) for res in results])
        mean[k] = stack.mean(axis=0)
        if n > 1:
            se[k] = stack.std(axis=0, ddof=1) / np.sqrt(n)
    return mean, se, n


def run_ensemble(schedule, psi0, seed, n_traj, **kwargs):
    """Convenience: n_traj trajectories with spawned seeds, averaged."""
    results = [
        quantum_jump_trajectory(schedule, psi0, seed, traj_index=i, **kwargs)
        for i in range(n_traj)
    ]
    return results, ensemble_average(results)
