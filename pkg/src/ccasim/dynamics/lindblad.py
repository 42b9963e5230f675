"""Dense Lindblad master-equation reference solver.

This is the oracle route for open dynamics: the density matrix is vectorized
and handed to scipy's adaptive Runge-Kutta (solve_ivp).  Dimensions are
guarded (default 64) because cost grows as dim^3 per right-hand side.  Trace
preservation is asserted to 1e-8 and the minimum eigenvalue monitored at
every output point.
"""

import logging

import numpy as np
from scipy.integrate import solve_ivp

from ..qcore.spaces import DensityMatrix
from .schedule import PulseSchedule, pack_segment, LindbladResult
from .kernels import hamiltonian_dense, env_value_py

log = logging.getLogger(__name__)

MAX_DENSE_DIM = 64
TRACE_TOL = 1e-8
EIG_FLOOR = -1e-9


def evolve_lindblad(schedule: PulseSchedule, rho0: DensityMatrix, times=None,
                    n_points=400, rtol=1e-9, atol=1e-12, max_dim=MAX_DENSE_DIM,
                    observables=None, store_states=False):
    """observables maps name -> f(t, rho_matrix) -> value."""
    from .schrodinger import output_times

    dim = schedule.space.dim
    if dim > max_dim:
        raise ValueError(
            f"Lindblad oracle limited to dim <= {max_dim}, got {dim} "
            "(raise max_dim explicitly if you really want this)"
        )
    if rho0.space.dim != dim:
        raise ValueError("initial state dimension mismatch")

    t_out = output_times(schedule.total_duration, times, n_points)
    bounds = schedule.boundaries()
    observables = observables or {}
    obs_out = {k: [] for k in observables}
    rhos = [] if store_states else None
    trace_dev = 0.0
    min_eig = np.inf

    pulse_at = {}
    for p in schedule.instantaneous_pulses:
        pulse_at.setdefault(float(p.time), []).append(p)

    rho = rho0.rho.copy()

    def record(t, rho_m):
        nonlocal trace_dev, min_eig
        tr = np.trace(rho_m).real
        trace_dev = max(trace_dev, abs(tr - 1.0))
        if trace_dev > TRACE_TOL:
            raise RuntimeError(f"Lindblad trace drifted by {trace_dev:g}")
        w = np.linalg.eigvalsh((rho_m + rho_m.conj().T) / 2)
        min_eig = min(min_eig, float(w.min()))
        if w.min() < EIG_FLOOR:
            log.warning("Lindblad positivity dip %.3g at t=%.3g", w.min(), t)
        for k, f in observables.items():
            obs_out[k].append(f(t, rho_m))
        if store_states:
            rhos.append(DensityMatrix(schedule.space, rho_m.copy(),
                                      validate=False))

    out_idx = 0
    n_out = len(t_out)
    # pulses at t exactly 0 fire before the first sample
    for p in pulse_at.get(0.0, []):
        U = p.unitary.dense()
        rho = U @ rho @ U.conj().T
    while out_idx < n_out and t_out[out_idx] <= 0.0:
        record(0.0, rho)
        out_idx += 1

    t0_seg = 0.0
    for seg_i, seg in enumerate(schedule.segments):
        t1_seg = bounds[seg_i + 1]
        if seg.duration == 0:
            t0_seg = t1_seg
            continue
        packed = pack_segment(seg, t0_seg, include_nojump=False)
        chans = [(ch.op.dense(),
                  (ch.op.dense().conj().T @ ch.op.dense()),
                  ch.amp_scale, ch.envelope)
                 for ch in seg.channels]

        def rhs(t, v):
            rho_m = v.reshape(dim, dim)
            H = hamiltonian_dense(packed, t)
            d = -1j * (H @ rho_m - rho_m @ H)
            tau = t - t0_seg
            for C, CdC, amp, env in chans:
                w = (amp * env_value_py(env.kind, env.p0, env.p1, env.p2,
                                        env.p3, tau)) ** 2
                if w == 0.0:
                    continue
                d += w * (C @ rho_m @ C.conj().T
                          - 0.5 * (CdC @ rho_m + rho_m @ CdC))
            return d.reshape(-1)

        seg_eval = [t for t in t_out[out_idx:] if t <= t1_seg * (1 + 1e-12)]
        # pulses interior to the segment split the solve
        interior = sorted(tp for tp in pulse_at
                          if t0_seg < tp < t1_seg)
        splits = [t0_seg] + interior + [t1_seg]
        for a, b in zip(splits[:-1], splits[1:]):
            evals = [t for t in seg_eval if a < t <= b * (1 + 1e-12)]
            eval_set = set(evals)
            sol = solve_ivp(rhs, (a, b), rho.reshape(-1), method="RK45",
                            t_eval=sorted(eval_set | {b}), rtol=rtol,
                            atol=atol)
            if not sol.success:
                raise RuntimeError(f"solve_ivp failed: {sol.message}")
            for tcol, vcol in zip(sol.t, sol.y.T):
                if tcol in eval_set:
                    record(tcol, vcol.reshape(dim, dim))
                    out_idx += 1
            rho = sol.y[:, -1].reshape(dim, dim)
            for p in pulse_at.get(float(b), []):
                U = p.unitary.dense()
                rho = U @ rho @ U.conj().T
        t0_seg = t1_seg

    return LindbladResult(
        times=t_out,
        observables={k: np.asarray(v) for k, v in obs_out.items()},
        rhos=rhos,
        trace_deviation=trace_dev,
        min_eigenvalue=float(min_eig),
    )


def dm_observable(op):
    """Wrap an Operator as a density-matrix observable tr(A rho)."""
    A = op.dense()

    def f(t, rho):
        return complex(np.trace(A @ rho))

    return f


def real_dm_observable(op):
    A = op.dense()

    def f(t, rho):
        return float(np.trace(A @ rho).real)

    return f
