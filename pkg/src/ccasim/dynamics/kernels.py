"""Integration kernels: packed-Hamiltonian apply, adaptive DP45, fixed-step GL4.

Two parallel implementations live here.  The numba path works on the flat
arrays of a PackedSegment with scalar loops and is built once through a
factory so the jitted functions can call each other.  The numpy path uses
scipy CSR matvecs and vectorized stage algebra; it is the fallback when
CCASIM_BACKEND=numpy (or numba is unavailable) and the comparison target for
the benchmark.  Both implement the same algorithms:

* DP45 — Dormand-Prince embedded 5(4) adaptive pair (FSAL), the default
  integrator; steps are capped by the fastest declared phase frequency and
  optionally stop when the squared norm crosses a jump threshold.
* GL4 — two-stage Gauss-Legendre collocation (order 4, A-stable).  Gauss
  methods preserve quadratic invariants, so the state norm is conserved to
  the fixed-point residual per step instead of accumulating truncation
  drift; used for multi-million-step closed runs.

Status codes returned by both drivers:
  0  reached the end time
  1  squared norm fell below the threshold; the state and time returned are
     those at the START of the crossing step, the crossing step size is in
     the h slot
  2  step-size underflow / step budget exhausted
  3  fixed-point iteration failed to converge (GL4)
"""

from math import cos, sin, pi, sqrt

import numpy as np

from ..backends import HAS_NUMBA, USE_NUMBA, njit

STATUS_DONE = 0
STATUS_THRESHOLD = 1
STATUS_STEPFAIL = 2
STATUS_NOCONV = 3

_H_FLOOR = 1e-18        # absolute step-size floor (seconds)
_DEFAULT_MAX_STEPS = 2_000_000_000

# Gauss-Legendre 2-stage tableau
_GL_C1 = 0.5 - sqrt(3.0) / 6.0
_GL_C2 = 0.5 + sqrt(3.0) / 6.0
_GL_A11 = 0.25
_GL_A12 = 0.25 - sqrt(3.0) / 6.0
_GL_A21 = 0.25 + sqrt(3.0) / 6.0
_GL_A22 = 0.25


def env_value_py(kind, p0, p1, p2, p3, tau):
    """Closed-form envelope shapes; see schedule.py for the kind table."""
    if kind == 0:
        return p0
    # ramp progress, clamped to [0, 1]
    u = tau / p2 if p2 > 0.0 else 1.0
    if u < 0.0:
        u = 0.0
    elif u > 1.0:
        u = 1.0
    if kind == 2:
        return p0 + (p1 - p0) * u
    s = 0.5 * (1.0 - cos(pi * u))
    om = p0 + (p1 - p0) * s
    if kind == 1:
        return om
    if kind == 3:
        return om / sqrt(p3 + om * om)
    if kind == 4:
        return om * om / (p3 + om * om)
    if kind == 5:
        b2 = p3 + om * om
        return p3 * om * om / (b2 * b2)
    if kind == 6:
        return sqrt(p3) * om / (p3 + om * om)
    return 0.0


def _build_scalar_kernels(jit):
    """Create (apply, dp45, gl4) with the given decorator (njit or identity)."""

    @jit
    def env_value(kind, p0, p1, p2, p3, tau):
        if kind == 0:
            return p0
        u = tau / p2 if p2 > 0.0 else 1.0
        if u < 0.0:
            u = 0.0
        elif u > 1.0:
            u = 1.0
        if kind == 2:
            return p0 + (p1 - p0) * u
        s = 0.5 * (1.0 - cos(pi * u))
        om = p0 + (p1 - p0) * s
        if kind == 1:
            return om
        if kind == 3:
            return om / sqrt(p3 + om * om)
        if kind == 4:
            return om * om / (p3 + om * om)
        if kind == 5:
            b2 = p3 + om * om
            return p3 * om * om / (b2 * b2)
        if kind == 6:
            return sqrt(p3) * om / (p3 + om * om)
        return 0.0

    @jit
    def apply_packed(t, seg_t0, y, out,
                     data, indices, indptr, scale, nu, envk, envp, sq,
                     n_rows, dim):
        """out = dpsi/dt = sum_r c_r(t) A_r y (all prefactors in scale)."""
        tau = t - seg_t0
        for i in range(dim):
            out[i] = 0.0 + 0.0j
        for r in range(n_rows):
            e = env_value(envk[r], envp[r, 0], envp[r, 1], envp[r, 2],
                          envp[r, 3], tau)
            if sq[r] == 1:
                e = e * e
            if e == 0.0:
                continue
            ph = nu[r] * t
            c = scale[r] * e * complex(cos(ph), sin(ph))
            base = r * (dim + 1)
            for i in range(dim):
                acc = 0.0 + 0.0j
                for k in range(indptr[base + i], indptr[base + i + 1]):
                    acc += data[k] * y[indices[k]]
                if acc != 0.0:
                    out[i] += c * acc
        return out

    @jit
    def dp45(y, t0, t1, seg_t0, h0, rtol, atol, h_cap, threshold,
             data, indices, indptr, scale, nu, envk, envp, sq,
             n_rows, dim, max_steps):
        k1 = np.empty(dim, np.complex128)
        k2 = np.empty(dim, np.complex128)
        k3 = np.empty(dim, np.complex128)
        k4 = np.empty(dim, np.complex128)
        k5 = np.empty(dim, np.complex128)
        k6 = np.empty(dim, np.complex128)
        k7 = np.empty(dim, np.complex128)
        ytmp = np.empty(dim, np.complex128)
        ynew = np.empty(dim, np.complex128)

        t = t0
        apply_packed(t, seg_t0, y, k1, data, indices, indptr, scale, nu,
                     envk, envp, sq, n_rows, dim)
        h = h0
        if h <= 0.0:
            fn = 0.0
            yn = 0.0
            for i in range(dim):
                fn += abs(k1[i]) ** 2
                yn += abs(y[i]) ** 2
            fn = sqrt(fn)
            yn = sqrt(yn)
            h = 0.01 * yn / fn if fn > 0.0 else (t1 - t0) * 0.01
        if h > h_cap:
            h = h_cap
        nsteps = 0
        while (t1 - t) > 1e-12 * (abs(t1) + abs(t) + 1e-300):
            if h > t1 - t:
                h = t1 - t
            # stage 2
            for i in range(dim):
                ytmp[i] = y[i] + h * (0.2 * k1[i])
            apply_packed(t + 0.2 * h, seg_t0, ytmp, k2, data, indices, indptr,
                         scale, nu, envk, envp, sq, n_rows, dim)
            for i in range(dim):
                ytmp[i] = y[i] + h * (0.075 * k1[i] + 0.225 * k2[i])
            apply_packed(t + 0.3 * h, seg_t0, ytmp, k3, data, indices, indptr,
                         scale, nu, envk, envp, sq, n_rows, dim)
            for i in range(dim):
                ytmp[i] = y[i] + h * ((44.0 / 45.0) * k1[i]
                                      - (56.0 / 15.0) * k2[i]
                                      + (32.0 / 9.0) * k3[i])
            apply_packed(t + 0.8 * h, seg_t0, ytmp, k4, data, indices, indptr,
                         scale, nu, envk, envp, sq, n_rows, dim)
            for i in range(dim):
                ytmp[i] = y[i] + h * ((19372.0 / 6561.0) * k1[i]
                                      - (25360.0 / 2187.0) * k2[i]
                                      + (64448.0 / 6561.0) * k3[i]
                                      - (212.0 / 729.0) * k4[i])
            apply_packed(t + (8.0 / 9.0) * h, seg_t0, ytmp, k5, data, indices,
                         indptr, scale, nu, envk, envp, sq, n_rows, dim)
            for i in range(dim):
                ytmp[i] = y[i] + h * ((9017.0 / 3168.0) * k1[i]
                                      - (355.0 / 33.0) * k2[i]
                                      + (46732.0 / 5247.0) * k3[i]
                                      + (49.0 / 176.0) * k4[i]
                                      - (5103.0 / 18656.0) * k5[i])
            apply_packed(t + h, seg_t0, ytmp, k6, data, indices, indptr,
                         scale, nu, envk, envp, sq, n_rows, dim)
            for i in range(dim):
                ynew[i] = y[i] + h * ((35.0 / 384.0) * k1[i]
                                      + (500.0 / 1113.0) * k3[i]
                                      + (125.0 / 192.0) * k4[i]
                                      - (2187.0 / 6784.0) * k5[i]
                                      + (11.0 / 84.0) * k6[i])
            apply_packed(t + h, seg_t0, ynew, k7, data, indices, indptr,
                         scale, nu, envk, envp, sq, n_rows, dim)
            # embedded error estimate
            errsum = 0.0
            for i in range(dim):
                err_i = h * ((71.0 / 57600.0) * k1[i]
                             - (71.0 / 16695.0) * k3[i]
                             + (71.0 / 1920.0) * k4[i]
                             - (17253.0 / 339200.0) * k5[i]
                             + (22.0 / 525.0) * k6[i]
                             - (1.0 / 40.0) * k7[i])
                ay = abs(y[i])
                ayn = abs(ynew[i])
                s = atol + rtol * (ay if ay > ayn else ayn)
                e = abs(err_i) / s
                errsum += e * e
            errnorm = sqrt(errsum / dim)
            nsteps += 1
            if errnorm <= 1.0:
                if threshold >= 0.0:
                    n2 = 0.0
                    for i in range(dim):
                        n2 += abs(ynew[i]) ** 2
                    if n2 < threshold:
                        return STATUS_THRESHOLD, t, h, nsteps
                t = t + h
                for i in range(dim):
                    y[i] = ynew[i]
                    k1[i] = k7[i]
                fac = 0.9 * errnorm ** -0.2 if errnorm > 1e-10 else 5.0
                if fac > 5.0:
                    fac = 5.0
                h = h * fac
                if h > h_cap:
                    h = h_cap
            else:
                fac = 0.9 * errnorm ** -0.2
                if fac < 0.2:
                    fac = 0.2
                h = h * fac
            if h < _H_FLOOR:
                return STATUS_STEPFAIL, t, h, nsteps
            if nsteps >= max_steps:
                return STATUS_STEPFAIL, t, h, nsteps
        return STATUS_DONE, t1, h, nsteps

    @jit
    def gl4(y, t0, t1, seg_t0, h_target, fp_tol, max_iters, threshold,
            data, indices, indptr, scale, nu, envk, envp, sq,
            n_rows, dim, max_steps):
        span = t1 - t0
        if span <= 0.0:
            return STATUS_DONE, t1, h_target, 0
        n = int(span / h_target) + 1
        h = span / n
        if n > max_steps:
            return STATUS_STEPFAIL, t0, h, 0

        kk1 = np.zeros(dim, np.complex128)
        kk2 = np.zeros(dim, np.complex128)
        kp1 = np.zeros(dim, np.complex128)
        kp2 = np.zeros(dim, np.complex128)
        f1 = np.empty(dim, np.complex128)
        f2 = np.empty(dim, np.complex128)
        ytmp = np.empty(dim, np.complex128)
        ynew = np.empty(dim, np.complex128)

        # prime the warm start
        apply_packed(t0, seg_t0, y, kk1, data, indices, indptr, scale, nu,
                     envk, envp, sq, n_rows, dim)
        for i in range(dim):
            kk2[i] = kk1[i]
            kp1[i] = kk1[i]
            kp2[i] = kk1[i]

        t = t0
        for step in range(n):
            t_a = t0 + (span * step) / n
            t_b = t0 + (span * (step + 1)) / n
            h = t_b - t_a
            ts1 = t_a + _GL_C1 * h
            ts2 = t_a + _GL_C2 * h
            # predictor: extrapolate the stage derivatives one step forward,
            # remembering the current ones for the next extrapolation
            for i in range(dim):
                g1 = 2.0 * kk1[i] - kp1[i]
                g2 = 2.0 * kk2[i] - kp2[i]
                kp1[i] = kk1[i]
                kp2[i] = kk2[i]
                kk1[i] = g1
                kk2[i] = g2
            converged = False
            for _ in range(max_iters):
                for i in range(dim):
                    ytmp[i] = y[i] + h * (_GL_A11 * kk1[i] + _GL_A12 * kk2[i])
                apply_packed(ts1, seg_t0, ytmp, f1, data, indices, indptr,
                             scale, nu, envk, envp, sq, n_rows, dim)
                for i in range(dim):
                    ytmp[i] = y[i] + h * (_GL_A21 * f1[i] + _GL_A22 * kk2[i])
                apply_packed(ts2, seg_t0, ytmp, f2, data, indices, indptr,
                             scale, nu, envk, envp, sq, n_rows, dim)
                dsum = 0.0
                ksum = 0.0
                for i in range(dim):
                    dsum += abs(f1[i] - kk1[i]) ** 2 + abs(f2[i] - kk2[i]) ** 2
                    ksum += abs(f1[i]) ** 2 + abs(f2[i]) ** 2
                for i in range(dim):
                    kk1[i] = f1[i]
                    kk2[i] = f2[i]
                if dsum <= fp_tol * fp_tol * (ksum + 1e-300):
                    converged = True
                    break
            if not converged:
                return STATUS_NOCONV, t_a, h, step
            for i in range(dim):
                ynew[i] = y[i] + 0.5 * h * (kk1[i] + kk2[i])
            if threshold >= 0.0:
                n2 = 0.0
                for i in range(dim):
                    n2 += abs(ynew[i]) ** 2
                if n2 < threshold:
                    return STATUS_THRESHOLD, t_a, h, step
            for i in range(dim):
                y[i] = ynew[i]
            t = t_b
        return STATUS_DONE, t1, h, n

    return env_value, apply_packed, dp45, gl4


# plain-python copies (used only for tiny reference evaluations / tests)
(env_value_ref, apply_packed_ref, _dp45_ref, _gl4_ref) = \
    _build_scalar_kernels(lambda f: f)

if HAS_NUMBA:
    (env_value_nb, apply_packed_nb, dp45_nb, gl4_nb) = \
        _build_scalar_kernels(njit(cache=False, fastmath=False))
else:  # pragma: no cover
    env_value_nb = apply_packed_nb = dp45_nb = gl4_nb = None


# ---- numpy/scipy vectorized fallback ------------------------------------

def _coeffs(packed, t):
    tau = t - packed.t0
    out = np.empty(packed.n_rows, dtype=np.complex128)
    for r in range(packed.n_rows):
        e = env_value_py(packed.envk[r], packed.envp[r, 0], packed.envp[r, 1],
                         packed.envp[r, 2], packed.envp[r, 3], tau)
        if packed.sq[r] == 1:
            e = e * e
        ph = packed.nu[r] * t
        out[r] = packed.scale[r] * e * complex(cos(ph), sin(ph))
    return out


def apply_packed_np(packed, t, y):
    c = _coeffs(packed, t)
    out = np.zeros_like(y)
    for r, A in enumerate(packed.mats):
        if c[r] != 0.0:
            out += c[r] * (A @ y)
    return out


_DP_A = {
    2: (0.2,),
    3: (0.075, 0.225),
    4: (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    5: (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    6: (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
        -5103.0 / 18656.0),
}
_DP_C = (0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0)
_DP_B5 = (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0,
          -2187.0 / 6784.0, 11.0 / 84.0, 0.0)
_DP_E = (71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0,
         -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)


def dp45_np(y, t0, t1, packed, h0, rtol, atol, h_cap, threshold,
            max_steps=_DEFAULT_MAX_STEPS):
    t = t0
    k = [None] * 7
    k[0] = apply_packed_np(packed, t, y)
    if h0 <= 0.0:
        fn = np.linalg.norm(k[0])
        h = 0.01 * np.linalg.norm(y) / fn if fn > 0 else (t1 - t0) * 0.01
    else:
        h = h0
    h = min(h, h_cap)
    nsteps = 0
    while (t1 - t) > 1e-12 * (abs(t1) + abs(t) + 1e-300):
        h = min(h, t1 - t)
        for s in range(2, 7):
            acc = y + h * sum(a * k[j] for j, a in enumerate(_DP_A[s]))
            k[s - 1] = apply_packed_np(packed, t + _DP_C[s - 1] * h, acc)
        ynew = y + h * sum(b * k[j] for j, b in enumerate(_DP_B5) if b)
        k[6] = apply_packed_np(packed, t + h, ynew)
        err = h * sum(e * k[j] for j, e in enumerate(_DP_E) if e)
        sc = atol + rtol * np.maximum(np.abs(y), np.abs(ynew))
        errnorm = np.sqrt(np.mean(np.abs(err / sc) ** 2))
        nsteps += 1
        if errnorm <= 1.0:
            if threshold >= 0.0 and np.vdot(ynew, ynew).real < threshold:
                return STATUS_THRESHOLD, t, h, nsteps, y
            t += h
            y = ynew
            k[0] = k[6]
            h = min(h * min(5.0, 0.9 * errnorm ** -0.2 if errnorm > 1e-10
                            else 5.0), h_cap)
        else:
            h = h * max(0.2, 0.9 * errnorm ** -0.2)
        if h < _H_FLOOR or nsteps >= max_steps:
            return STATUS_STEPFAIL, t, h, nsteps, y
    return STATUS_DONE, t1, h, nsteps, y


def gl4_np(y, t0, t1, packed, h_target, fp_tol, max_iters, threshold,
           max_steps=_DEFAULT_MAX_STEPS):
    span = t1 - t0
    if span <= 0.0:
        return STATUS_DONE, t1, h_target, 0, y
    n = int(span / h_target) + 1
    if n > max_steps:
        return STATUS_STEPFAIL, t0, span / n, 0, y
    kk1 = apply_packed_np(packed, t0, y)
    kk2 = kk1.copy()
    kp1 = kk1.copy()
    kp2 = kk1.copy()
    for step in range(n):
        t_a = t0 + (span * step) / n
        t_b = t0 + (span * (step + 1)) / n
        h = t_b - t_a
        ts1 = t_a + _GL_C1 * h
        ts2 = t_a + _GL_C2 * h
        kk1, kp1 = 2.0 * kk1 - kp1, kk1
        kk2, kp2 = 2.0 * kk2 - kp2, kk2
        converged = False
        for _ in range(max_iters):
            f1 = apply_packed_np(packed, ts1,
                                 y + h * (_GL_A11 * kk1 + _GL_A12 * kk2))
            f2 = apply_packed_np(packed, ts2,
                                 y + h * (_GL_A21 * f1 + _GL_A22 * kk2))
            d = np.sum(np.abs(f1 - kk1) ** 2) + np.sum(np.abs(f2 - kk2) ** 2)
            ks = np.sum(np.abs(f1) ** 2) + np.sum(np.abs(f2) ** 2)
            kk1, kk2 = f1, f2
            if d <= fp_tol * fp_tol * (ks + 1e-300):
                converged = True
                break
        if not converged:
            return STATUS_NOCONV, t_a, h, step, y
        ynew = y + 0.5 * h * (kk1 + kk2)
        if threshold >= 0.0 and np.vdot(ynew, ynew).real < threshold:
            return STATUS_THRESHOLD, t_a, h, step, y
        y = ynew
    return STATUS_DONE, t1, h, n, y


# ---- dispatch ------------------------------------------------------------

def advance_dp45(packed, y, t0, t1, h0=-1.0, rtol=1e-9, atol=1e-11,
                 threshold=-1.0, backend=None,
                 max_steps=_DEFAULT_MAX_STEPS):
    """Integrate y in place from t0 to t1; returns (status, t, h, nsteps)."""
    use_nb = USE_NUMBA if backend is None else (backend == "numba")
    h_cap = packed.h_cap if np.isfinite(packed.h_cap) else 1e300
    if use_nb:
        if apply_packed_nb is None:
            raise RuntimeError("numba backend requested but numba unavailable")
        return dp45_nb(y, t0, t1, packed.t0, h0, rtol, atol, h_cap, threshold,
                       packed.data, packed.indices, packed.indptr,
                       packed.scale, packed.nu, packed.envk, packed.envp,
                       packed.sq, packed.n_rows, packed.dim, max_steps)
    status, t, h, nsteps, yout = dp45_np(
        y.copy(), t0, t1, packed, h0, rtol, atol, h_cap, threshold, max_steps)
    y[:] = yout
    return status, t, h, nsteps


def advance_gl4(packed, y, t0, t1, h_target, fp_tol=1e-13, max_iters=60,
                threshold=-1.0, backend=None,
                max_steps=_DEFAULT_MAX_STEPS):
    use_nb = USE_NUMBA if backend is None else (backend == "numba")
    h_target = min(h_target, packed.h_cap) if np.isfinite(packed.h_cap) \
        else h_target
    if use_nb:
        if apply_packed_nb is None:
            raise RuntimeError("numba backend requested but numba unavailable")
        return gl4_nb(y, t0, t1, packed.t0, h_target, fp_tol, max_iters,
                      threshold, packed.data, packed.indices, packed.indptr,
                      packed.scale, packed.nu, packed.envk, packed.envp,
                      packed.sq, packed.n_rows, packed.dim, max_steps)
    status, t, h, nsteps, yout = gl4_np(
        y.copy(), t0, t1, packed, h_target, fp_tol, max_iters, threshold,
        max_steps)
    y[:] = yout
    return status, t, h, nsteps


def hamiltonian_dense(packed, t, include_nonhermitian=True):
    """Assemble H(t) densely from a packed segment (diagnostics / oracles).

    Rows were packed with the Schrodinger -i folded in, so this multiplies
    back by +i to return H itself (including any -i/2 C†C part unless
    include_nonhermitian=False, in which case decay rows are skipped).
    """
    c = _coeffs(packed, t)
    H = np.zeros((packed.dim, packed.dim), dtype=np.complex128)
    for r, A in enumerate(packed.mats):
        if packed.sq[r] == 1 and not include_nonhermitian:
            continue
        H += (1j * c[r]) * A.toarray()
    return H
