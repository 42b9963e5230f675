"""Pulse schedules and the packed time-dependent Hamiltonian representation.

A schedule is a list of segments.  Within a segment the generator is

    H(t) = sum_m  scale_m * env_m(tau) * exp(i nu_m t) * A_m
         - (i/2) sum_q [amp_q(tau)]^2  C_q† C_q            (no-jump part)

with t the global time and tau = t - (segment start) the segment-local time.
Envelopes are closed-form shapes evaluated inside the integration kernels,
which keeps runs bit-reproducible.  Hermitian physics terms are declared once
with `add_hc=True` and expand to the (A, +nu) / (A†, -nu) pair at packing
time; real envelopes then make the pair Hermitian automatically.

Declared frequencies cap the integrator step: no step exceeds a fixed
fraction of the fastest declared oscillation period.
"""

from dataclasses import dataclass, field

import numpy as np

from ..qcore.spaces import Operator

# envelope kinds (kernel switch values)
ENV_CONST = 0        # value p0
ENV_SMOOTHSTEP = 1   # p0 -> p1 over duration p2 with (1-cos)/2 shape
ENV_LINEAR = 2       # p0 -> p1 over duration p2
ENV_EIT_DARK_AMP = 3  # Omega(tau)/sqrt(p3+Omega^2), Omega smoothstep p0->p1 over p2
ENV_EIT_J_FRAC = 4    # Omega^2/(p3+Omega^2)
ENV_EIT_U_FRAC = 5    # p3*Omega^2/(p3+Omega^2)^2
ENV_EIT_COLL_AMP = 6  # sqrt(p3)*Omega/(p3+Omega^2), i.e. g*Omega/B^2


@dataclass(frozen=True)
class Envelope:
    kind: int = ENV_CONST
    p0: float = 1.0
    p1: float = 0.0
    p2: float = 0.0
    p3: float = 0.0

    def __call__(self, tau):
        # reference implementation; kernels carry their own copy
        from .kernels import env_value_py

        return env_value_py(self.kind, self.p0, self.p1, self.p2, self.p3, tau)


CONST_ENV = Envelope()


def smoothstep(v0, v1, duration):
    return Envelope(ENV_SMOOTHSTEP, v0, v1, duration)


@dataclass(frozen=True)
class Term:
    """One Hamiltonian term scale * env(tau) * exp(i nu t) * A (+ h.c.)."""

    op: Operator
    scale: complex = 1.0
    frequency: float = 0.0
    envelope: Envelope = CONST_ENV
    add_hc: bool = False


@dataclass(frozen=True)
class Channel:
    """Collapse channel C(t) = amp_scale * env(tau) * op.

    The operator convention carries the rate: a decay with rate kappa uses
    amp_scale = sqrt(kappa) and a bare lowering operator.
    """

    op: Operator
    amp_scale: float = 1.0
    envelope: Envelope = CONST_ENV


@dataclass(frozen=True)
class Segment:
    duration: float
    terms: tuple
    channels: tuple = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "channels", tuple(self.channels))
        if self.duration < 0:
            raise ValueError("segment duration must be >= 0")
        if not self.terms:
            raise ValueError("segment needs at least one term")

    @property
    def space(self):
        return self.terms[0].op.space

    def max_frequency(self):
        return max((abs(t.frequency) for t in self.terms), default=0.0)


@dataclass(frozen=True)
class InstantaneousPulse:
    time: float
    unitary: Operator
    label: str = ""


@dataclass(frozen=True)
class PulseSchedule:
    segments: tuple
    instantaneous_pulses: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(
            self, "instantaneous_pulses",
            tuple(sorted(self.instantaneous_pulses, key=lambda p: p.time)),
        )
        if not self.segments:
            raise ValueError("schedule needs at least one segment")
        sp = self.segments[0].space
        for s in self.segments:
            if s.space.dim != sp.dim:
                raise ValueError("all segments must share one space dimension")

    @property
    def space(self):
        return self.segments[0].space

    @property
    def total_duration(self):
        return sum(s.duration for s in self.segments)

    def boundaries(self):
        """Segment start times, plus the final end time."""
        out = [0.0]
        for s in self.segments:
            out.append(out[-1] + s.duration)
        return np.asarray(out)


def constant_schedule(hamiltonian: Operator, duration, channels=(),
                      max_frequency=0.0, label="") -> PulseSchedule:
    """Single-segment schedule for a static (possibly non-Hermitian-free) H."""
    term = Term(op=hamiltonian, scale=1.0, frequency=0.0)
    seg = Segment(duration=duration, terms=(term,), channels=tuple(channels),
                  label=label)
    return PulseSchedule(segments=(seg,))


# ---- packing to flat arrays for the kernels ------------------------------

@dataclass
class PackedSegment:
    """Flat-array form of one segment, no-jump generator folded in.

    Row coefficient:  c_r(t) = scale[r] * env_r(tau)^(1+sq[r]) * exp(i nu[r] t)
    and  dpsi/dt = sum_r c_r(t) * (A_r psi),  with the -i of the Schrodinger
    equation and the -(1/2) of the no-jump decay already inside scale[r].
    """

    dim: int
    n_rows: int
    data: np.ndarray
    indices: np.ndarray
    indptr: np.ndarray      # shape (n_rows*(dim+1),)
    scale: np.ndarray       # complex
    nu: np.ndarray
    envk: np.ndarray
    envp: np.ndarray        # shape (n_rows, 4)
    sq: np.ndarray
    t0: float               # global segment start time
    duration: float
    h_cap: float            # step ceiling from declared frequencies
    mats: list              # per-row CSR matrices (numpy backend / diagnostics)


# steps per fastest declared oscillation period used as the step ceiling
STEPS_PER_CYCLE = 10.0


def _env_arrays(env: Envelope):
    return env.kind, (env.p0, env.p1, env.p2, env.p3)


def pack_segment(seg: Segment, t0: float, include_nojump=True,
                 h_cap_override=None, merge_static=True) -> PackedSegment:
    dim = seg.space.dim
    rows = []  # (csr, scale, nu, envk, envp, sq)
    for term in seg.terms:
        k, p = _env_arrays(term.envelope)
        A = term.op.csr()
        rows.append((A, -1j * term.scale, term.frequency, k, p, 0))
        if term.add_hc:
            rows.append((A.conjugate().transpose().tocsr(),
                         -1j * np.conj(term.scale), -term.frequency, k, p, 0))
    if include_nojump:
        for ch in seg.channels:
            k, p = _env_arrays(ch.envelope)
            C = ch.op.csr()
            G = (C.conjugate().transpose() @ C).tocsr()
            # -i * (-i/2) amp^2 = -(1/2) amp^2  (real negative row scale)
            rows.append((G, -0.5 * ch.amp_scale**2, 0.0, k, p, 1))

    if merge_static:
        # rows with no phase and a constant envelope have a fixed coefficient
        # scale * p0^(1+sq); sum them into one matrix per sq group so the
        # kernels touch one CSR instead of many
        kept, static = [], {0: None, 1: None}
        for (A, sc, nu_r, k, p, sq_r) in rows:
            if nu_r == 0.0 and k == ENV_CONST:
                coeff = sc * p[0] ** (1 + sq_r)
                m = A.astype(np.complex128) * coeff
                static[sq_r] = m if static[sq_r] is None else static[sq_r] + m
            else:
                kept.append((A, sc, nu_r, k, p, sq_r))
        for sq_r in (0, 1):
            if static[sq_r] is not None:
                kept.append((static[sq_r].tocsr(), 1.0 + 0j, 0.0,
                             ENV_CONST, (1.0, 0.0, 0.0, 0.0), sq_r))
        rows = kept

    n_rows = len(rows)
    indptr = np.empty(n_rows * (dim + 1), dtype=np.int64)
    data_parts, index_parts = [], []
    offset = 0
    mats = []
    for r, (A, _, _, _, _, _) in enumerate(rows):
        A = A.tocsr()
        A.sort_indices()
        mats.append(A)
        indptr[r * (dim + 1):(r + 1) * (dim + 1)] = A.indptr + offset
        data_parts.append(A.data.astype(np.complex128))
        index_parts.append(A.indices.astype(np.int64))
        offset += A.nnz
    nu = np.array([r[2] for r in rows], dtype=np.float64)
    nu_max = np.max(np.abs(nu)) if n_rows else 0.0
    if h_cap_override is not None:
        h_cap = h_cap_override
    elif nu_max > 0:
        h_cap = (2 * np.pi / nu_max) / STEPS_PER_CYCLE
    else:
        h_cap = np.inf
    return PackedSegment(
        dim=dim,
        n_rows=n_rows,
        data=np.concatenate(data_parts) if data_parts else np.zeros(0, np.complex128),
        indices=np.concatenate(index_parts) if index_parts else np.zeros(0, np.int64),
        indptr=indptr,
        scale=np.array([r[1] for r in rows], dtype=np.complex128),
        nu=nu,
        envk=np.array([r[3] for r in rows], dtype=np.int64),
        envp=np.array([r[4] for r in rows], dtype=np.float64).reshape(n_rows, 4),
        sq=np.array([r[5] for r in rows], dtype=np.int64),
        t0=t0,
        duration=seg.duration,
        h_cap=h_cap,
        mats=mats,
    )


# ---- result containers ---------------------------------------------------

@dataclass
class EvolutionResult:
    times: np.ndarray
    observables: dict
    norms: np.ndarray = None
    states: list = None
    nsteps: int = 0


@dataclass
class TrajectoryResult:
    times: np.ndarray
    observables: dict
    jumps: list            # list of (time, channel_index)
    seed: int
    norm_floor: float
    states: list = None
    nsteps: int = 0


@dataclass
class LindbladResult:
    times: np.ndarray
    observables: dict
    rhos: list = None
    trace_deviation: float = 0.0
    min_eigenvalue: float = 0.0
