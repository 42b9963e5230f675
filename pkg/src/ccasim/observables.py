"""Derived quantities read off evolution output.

The dynamics layer records raw expectation values; everything here turns
those into the numbers the experiments are judged on: renormalized means
for conditional (no-jump) runs, on-site number fluctuations, deviations
between a full and an effective description sampled on the same grid, and
reduced-state diagnostics (entropy, purity) of an atomic qubit chain.
"""

from dataclasses import dataclass
from math import log

import numpy as np

from .qcore import (DensityMatrix, Factor, SpaceSpec, SPIN_HALF, space,
                    partial_trace, purity, von_neumann_entropy)

LN2 = log(2.0)


# ---- expectation-value observables --------------------------------------

def normalized_op_observable(op):
    """<A> against psi/|psi|, for conditional no-jump evolutions.

    Under a no-jump effective Hamiltonian the norm decays with the survival
    probability; dividing it out gives the expectation conditioned on no
    loss event, directly comparable between two models with matching decay.
    """
    A = op.csr()

    def f(t, y):
        nrm = float(np.vdot(y, y).real)
        return float(np.vdot(y, A @ y).real / nrm) if nrm > 0.0 else 0.0

    return f


def number_stats_observables(num_ops, names=None, normalized=False,
                             stat="std"):
    """Mean and fluctuation observables for a list of number operators.

    Returns {"{name}_n": <n>, "{name}_dn": fluctuation, ...} ready for
    the `observables=` argument of the evolvers.  The fluctuation is the
    standard deviation sqrt(<n^2>-<n>^2) by default, or the variance when
    stat="var".  `num_ops` must be Hermitian (number-like); tiny negative
    variances are clipped to zero.
    """
    if stat not in ("std", "var"):
        raise ValueError(f"stat must be 'std' or 'var', got {stat!r}")
    if names is None:
        names = [f"site{i}" for i in range(len(num_ops))]
    obs = {}
    for name, op in zip(names, num_ops):
        A = op.csr()
        A2 = (op @ op).csr()

        def mean(t, y, A=A):
            nrm = float(np.vdot(y, y).real) if normalized else 1.0
            return float(np.vdot(y, A @ y).real / nrm) if nrm > 0 else 0.0

        def fluct(t, y, A=A, A2=A2):
            nrm = float(np.vdot(y, y).real) if normalized else 1.0
            if nrm <= 0.0:
                return 0.0
            m = np.vdot(y, A @ y).real / nrm
            m2 = np.vdot(y, A2 @ y).real / nrm
            var = max(m2 - m * m, 0.0)
            return float(var if stat == "var" else np.sqrt(var))

        obs[f"{name}_n"] = mean
        obs[f"{name}_dn"] = fluct
    return obs


def ramped_number_stats(op_of_t, name, normalized=True):
    """Like number_stats_observables for an operator that changes in time.

    `op_of_t(t)` must return the (Hermitian) operator at time t; it is
    built once per output time and shared between the mean and the
    fluctuation callables.  Used for polariton numbers under a control
    ramp, where the mode itself rotates with the drive.
    """
    cache = {}

    def mats(t):
        if t not in cache:
            op = op_of_t(t)
            cache.clear()  # output times arrive in order; keep one entry
            cache[t] = (op.csr(), (op @ op).csr())
        return cache[t]

    def mean(t, y):
        A, _ = mats(t)
        nrm = float(np.vdot(y, y).real) if normalized else 1.0
        return float(np.vdot(y, A @ y).real / nrm) if nrm > 0 else 0.0

    def fluct(t, y):
        A, A2 = mats(t)
        nrm = float(np.vdot(y, y).real) if normalized else 1.0
        if nrm <= 0.0:
            return 0.0
        m = np.vdot(y, A @ y).real / nrm
        m2 = np.vdot(y, A2 @ y).real / nrm
        return float(np.sqrt(max(m2 - m * m, 0.0)))

    return {f"{name}_n": mean, f"{name}_dn": fluct}


# ---- curve comparison ---------------------------------------------------

@dataclass(frozen=True)
class SeriesDeviation:
    """Pointwise gap between two curves on a shared time grid."""

    max_abs: float
    max_rel: float      # max |a-b| / scale, scale = max(|b|) unless given
    t_at_max: float
    scale: float


def series_deviation(times, a, b, scale=None) -> SeriesDeviation:
    """Compare curve `a` against reference `b` sampled at `times`.

    The relative figure divides the worst pointwise gap by a single scale
    (the reference curve's peak magnitude by default), so near-zeros of the
    reference do not blow it up.
    """
    times = np.asarray(times, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.shape != times.shape:
        raise ValueError("series_deviation needs equally sampled curves")
    gap = np.abs(a - b)
    i = int(np.argmax(gap))
    if scale is None:
        scale = float(np.max(np.abs(b)))
    rel = float(gap[i] / scale) if scale > 0 else float("inf")
    return SeriesDeviation(max_abs=float(gap[i]), max_rel=rel,
                           t_at_max=float(times[i]), scale=float(scale))


def observable_maxima(result, names=None):
    """{name: max over time} of recorded (real) observables."""
    if names is None:
        names = list(result.observables)
    return {n: float(np.max(np.asarray(result.observables[n]).real))
            for n in names}


# ---- reduced-state diagnostics of an atomic qubit chain -----------------

@dataclass(frozen=True)
class ChainDiagnostics:
    """Reduced-state figures of an n-site qubit chain."""

    site_entropy: tuple      # von Neumann entropy per site, nats
    chain_purity: float      # tr rho_chain^2 after projection
    discarded_weight: float  # population outside the qubit subspace

    @property
    def site_entropy_ln2(self):
        """Per-site entropy in units of ln 2 (1.0 = maximally mixed qubit)."""
        return tuple(s / LN2 for s in self.site_entropy)


def qubit_chain_density(state, atom_labels, max_discard=0.1):
    """Reduced qubit-chain density matrix of a cavity-array state.

    Traces out everything but `atom_labels`, then projects each atom onto
    its two lowest levels (the effective-spin subspace) and renormalizes.
    Returns (DensityMatrix over spin-1/2 factors, discarded_weight); raises
    if more than `max_discard` of the population sat outside the subspace,
    since the diagnostics are then not describing the intended chain.
    """
    rho = partial_trace(state, atom_labels)
    dims = rho.space.dims
    n = len(dims)
    m = rho.rho.reshape(dims + dims)
    for axis in range(2 * n):
        m = np.take(m, [0, 1], axis=axis)
    m = m.reshape(2**n, 2**n)
    weight = float(np.trace(m).real)
    discarded = 1.0 - weight
    if discarded > max_discard:
        raise ValueError(
            f"{discarded:.3f} of the population lies outside the qubit "
            f"subspace (> {max_discard}); reduced-chain figures would be "
            "meaningless")
    qspace = space(*(Factor(f"q{i}", SPIN_HALF, 2) for i in range(n)))
    rho_q = DensityMatrix(qspace, m / weight, validate=False)
    return rho_q, discarded


def chain_diagnostics(state, atom_labels, max_discard=0.1) -> ChainDiagnostics:
    """Single-site entropies and whole-chain purity of the qubit chain.

    A graph (cluster) state shows maximal single-site entropy (ln 2) while
    the chain as a whole stays pure, so the pair separates genuine
    multipartite entanglement from mixing with photons or leaked levels.
    """
    rho_q, discarded = qubit_chain_density(state, atom_labels, max_discard)
    ent = []
    for i in range(len(atom_labels)):
        rho_i = partial_trace(rho_q, [f"q{i}"])
        ent.append(von_neumann_entropy(rho_i))
    return ChainDiagnostics(site_entropy=tuple(ent),
                            chain_purity=purity(rho_q),
                            discarded_weight=discarded)
