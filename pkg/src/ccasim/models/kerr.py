"""Collective three-level Kerr medium: full model and effective strengths.

N atoms with levels 0, 1 (stable) and 2 (excited) share a cavity mode: the
cavity drives 0-2 at detuning Delta1, a Raman pair drives the symmetric
(0,1)->2 ladder at detuning Delta2 with two-photon rate Theta = 2 Lambda^2
/ Delta2.  Dispersive elimination of level 2 leaves a photon-number-squared
phase written on the 0/1 qubits; the pulse sequence in dynamics.sequences
turns that into self-Kerr evolution.

The permutation-symmetric sector is exact here (dynamics and initial states
are symmetric), so the atomic factor is a CollectiveSpace with the exact
Dicke matrix elements, dimension (N+1)(N+2)/2.
"""

from dataclasses import dataclass
from math import sqrt

import numpy as np

from ..qcore import (Factor, SpaceSpec, Operator, Ket, space,
                     PHOTON_MODE, COLLECTIVE_MODE,
                     annihilation, number, embed, CollectiveSpace)
from .params import KerrParams, check_ratios


@dataclass
class KerrMedium:
    """Space and operator bundle for one Kerr cell."""

    space: SpaceSpec
    collective: CollectiveSpace
    a: Operator
    n_ph: Operator
    params: KerrParams

    def S(self, x, y) -> Operator:
        """Collective sum_j |x><y|_j embedded in the full space."""
        return embed(self.space, "at", self.collective.transition(x, y))

    def charge(self) -> Operator:
        """Conserved n_ph + n_2 (only the Raman drive moves it, by +-1)."""
        return self.n_ph + self.S(2, 2)


def kerr_medium(p: KerrParams, n_init) -> KerrMedium:
    """Medium sized for an n_init-photon run.

    The cavity coupling conserves n_ph + n_2 and the Raman drive raises it
    by at most one unit per atom, so photon occupation never exceeds
    n_init + N: the cutoff n_init + N + 1 is exact, not a truncation.
    """
    coll = CollectiveSpace(p.N, 3)
    spc = space(Factor("ph", PHOTON_MODE, n_init + p.N + 1),
                Factor("at", COLLECTIVE_MODE, coll.dim))
    return KerrMedium(space=spc, collective=coll,
                      a=annihilation(spc, "ph"), n_ph=number(spc, "ph"),
                      params=p)


def minus_state(medium: KerrMedium) -> np.ndarray:
    """|-)^(x)N with |-) = (|0> - |1>)/sqrt(2), in the symmetric basis."""
    return medium.collective.product_state(
        np.array([1.0, -1.0, 0.0]) / sqrt(2.0))


def kerr_initial_ket(medium: KerrMedium, n_init) -> Ket:
    """|n_init> (x) |-)^N."""
    ph = np.zeros(medium.space.dims[0], dtype=np.complex128)
    ph[n_init] = 1.0
    return Ket(medium.space, np.kron(ph, minus_state(medium)))


# ---- Hamiltonian term groups (see dynamics.sequences for the schedule) ---

def cavity_term(medium: KerrMedium):
    """g e^{-i Delta1 t} a S20 + h.c.: photon absorbed, one atom 0 -> 2."""
    from ..dynamics import Term

    p = medium.params
    return Term(op=medium.a @ medium.S(2, 0), scale=p.g,
                frequency=-p.Delta1, add_hc=True)


def raman_term(medium: KerrMedium):
    """sqrt2 Lambda e^{-i Delta2 t} S2+ + h.c. with S2+ = (S20+S21)/sqrt2."""
    from ..dynamics import Term

    p = medium.params
    return Term(op=medium.S(2, 0) + medium.S(2, 1), scale=p.Lambda,
                frequency=-p.Delta2, add_hc=True)


def qubit_pulse_term(medium: KerrMedium, sign=+1):
    """(sign) (Omega_pulse/2)(S01 + S10): resonant 0-1 Rabi drive.

    Over a duration pi/(2 Omega_pulse) this applies exp(-i sign (pi/4)
    sum_j sigma_x^j) (Rabi-area convention).
    """
    from ..dynamics import Term

    p = medium.params
    if p.Omega_pulse <= 0:
        raise ValueError("Omega_pulse must be positive for pulses")
    return Term(op=medium.S(0, 1) + medium.S(1, 0),
                scale=sign * p.Omega_pulse / 2.0)


def pulse_duration(p: KerrParams):
    return np.pi / (2.0 * p.Omega_pulse)


# ---- effective model -----------------------------------------------------

def kerr_phase_rate(p: KerrParams):
    """Per-atom squared-number phase rate g^4/(4 Delta1^2 Theta).

    The collective strength kappa_eff = N * this; an n-photon state writes
    phase (rate * n^2 * t) on each atom's 0/1 coherence.
    """
    return p.g**4 / (4.0 * p.Delta1**2 * p.Theta)


def ideal_kerr_signal(p: KerrParams, n, t):
    """Re<psi0| e^{-i H_eff t} |psi0> for |n>|-)^N: cos(kappa_eff n^2 t).

    Each atom contributes the same pure phase, so the joint overlap is a
    single cosine at the collective rate, not a product of per-atom ones.
    """
    return np.cos(p.kappa_eff * n**2 * np.asarray(t))


def first_zero_time(p: KerrParams, n):
    """First zero of the ideal signal: pi / (2 kappa_eff n^2)."""
    return np.pi / (2.0 * p.kappa_eff * n**2)


def kerr_condition_ratios(p: KerrParams):
    """The dispersive-validity ratios of the elimination, all << 1 ideally."""
    rtN = sqrt(p.N)
    sep = abs(p.Delta2 - p.Delta1)
    ratios = {
        "sqrtN*g/Delta1": rtN * p.g / abs(p.Delta1),
        "sqrtN*Lambda/Delta2": rtN * p.Lambda / abs(p.Delta2),
        "sqrtN*g/|Delta2-Delta1|": rtN * p.g / sep if sep else float("inf"),
        "sqrtN*Lambda/|Delta2-Delta1|": rtN * p.Lambda / sep if sep else float("inf"),
        "sqrtN*g^2/(2 Delta1 Theta)": rtN * p.g**2 / (2 * abs(p.Delta1) * p.Theta),
        "(g^2/2Delta1)^3 sqrtN/Theta^3": (p.g**2 / (2 * p.Delta1)) ** 3 * rtN
        / p.Theta**3,
    }
    return check_ratios(ratios, where="kerr elimination")


# ---- pulse-protocol run at the dispersive level --------------------------

@dataclass(frozen=True)
class KerrNoise:
    """Loss rates for a protocol run: cavity decay, spontaneous emission
    from the (virtually populated) excited level, per-level dephasing."""

    kappa: float = 0.0
    gamma: float = 0.0
    dephasing: float = 0.0


class DispersiveKerrProtocol:
    """Pulse sequence evaluated on the post-elimination qubit+photon model.

    After adiabatic elimination of level 2 the cell is a photon mode and N
    qubits with H_main = (g^2/Delta1) n |0><0| + Theta |+><+| (per atom)
    and H_win = (g^2/Delta1) n |0><0| when the Raman pair is off.  The
    sequence

        M, window(1/Theta), M+,  main(t),  M+, window(1/Theta), M

    with M = exp(+i pi/4 sigma_x) rotates the number-dependent Stark term
    into the +/- plane, cancels it there, and leaves the pure n^2 phase.
    Segments are static, so each block is a single matrix exponential; no
    integrator is involved.

    With noise, jump operators are folded in as -i/2 C'C (conditional
    no-jump evolution, decaying norm): cavity decay acts directly; emission
    from level 2 enters scaled by its admixture amplitudes (g/Delta1 on the
    cavity route, sqrt2 Lambda/Delta2 on the Raman route, the latter only
    while the Raman pair is on); dephasing acts on both qubit levels.
    """

    def __init__(self, p: KerrParams, n_init, noise: KerrNoise = None):
        from scipy.linalg import expm

        self.params = p
        self.n_init = n_init
        nc = n_init + 1
        dims = [nc] + [2] * p.N

        def femb(i, m):
            ops = [np.eye(d) for d in dims]
            ops[i] = m
            out = ops[0]
            for o in ops[1:]:
                out = np.kron(out, o)
            return out

        n_op = femb(0, np.diag(np.arange(nc, dtype=float)))
        a_op = femb(0, np.diag(np.sqrt(np.arange(1.0, nc)), 1))
        plus = np.array([1.0, 1.0]) / sqrt(2.0)
        P0 = np.diag([1.0, 0.0])
        S00 = sum(femb(1 + k, P0) for k in range(p.N))
        Spp = sum(femb(1 + k, np.outer(plus, plus)) for k in range(p.N))
        c = p.g**2 / p.Delta1
        h_win = c * (n_op @ S00)
        h_main = h_win + p.Theta * Spp

        def damp(ops):
            return sum(-0.5j * (C.conj().T @ C) for C in ops)

        if noise is not None:
            base = [np.sqrt(noise.kappa) * a_op]
            raman = []
            for k in range(p.N):
                for lvl in (0, 1):
                    tgt = np.zeros((2, 2))
                    tgt[lvl, 0] = 1.0
                    base.append(np.sqrt(noise.gamma / 2.0) * (p.g / p.Delta1)
                                * (a_op @ femb(1 + k, tgt)))
                    raman.append(np.sqrt(noise.gamma / 2.0)
                                 * (sqrt(2.0) * p.Lambda / p.Delta2)
                                 * femb(1 + k, np.outer(np.eye(2)[lvl], plus)))
                for lvl in (0, 1):
                    proj = np.diag(np.eye(2)[lvl])
                    base.append(np.sqrt(noise.dephasing) * femb(1 + k, proj))
            h_win = h_win + damp(base)
            h_main = h_main + damp(base + raman)

        M1 = expm(1j * np.pi / 4.0 * np.array([[0.0, 1.0], [1.0, 0.0]]))
        M = np.eye(nc)
        for _ in range(p.N):
            M = np.kron(M, M1)
        W = expm(-1j * h_win / p.Theta)
        self._h_main = h_main
        self._pre = M.conj().T @ W @ M      # first block, time order M, W, M+
        self._post = M @ W @ M.conj().T
        psi = np.zeros(nc)
        psi[n_init] = 1.0
        minus = np.array([1.0, -1.0]) / sqrt(2.0)
        for _ in range(p.N):
            psi = np.kron(psi, minus)
        self._psi0 = psi.astype(np.complex128)

    def overlap(self, t_main):
        """<psi0| V(t) |psi0> for the full sequence with main window t."""
        from scipy.linalg import expm

        V = self._post @ expm(-1j * self._h_main * t_main) @ self._pre
        return complex(np.vdot(self._psi0, V @ self._psi0))


def kerr_signal_Y(p: KerrParams, n, t, ov):
    """Re of the overlap with the known linear phase removed.

    Every window writes the same number-linear Stark phase N g^2/(2 Delta1)
    per photon (identity part of the |0><0| shift); over the two 1/Theta
    windows plus the main window that is N g^2/(2 Delta1) n (t + 2/Theta).
    What remains oscillates at the n^2 rate: ideally cos(kappa_eff n^2 t).
    """
    phase = p.N * p.g**2 / (2.0 * p.Delta1) * n * (t + 2.0 / p.Theta)
    return (np.exp(1j * phase) * ov).real


# ---- cross-Kerr variants -------------------------------------------------

@dataclass(frozen=True)
class CrossKerrCoefficients:
    """H_eff = kappa_aa (na)^2 + kappa_bb (nb)^2 + kappa_ab na nb (x S3)."""

    kappa_aa: float
    kappa_bb: float
    kappa_ab: float


def cross_kerr_coefficients(p: KerrParams, variant, g_b=None, Delta1_b=None,
                            delta=None) -> CrossKerrCoefficients:
    """Two-mode Kerr couplings from a squared two-mode Stark operator.

    variant="two-polarizations": modes couple with (g_a, Delta1_a) and
    (g_b, Delta1_b); the Stark operator is the DIFFERENCE of the two
    number shifts, so the cross term is negative.

    variant="two-detunings": one coupling g seen at Delta1 -+ delta by the
    two modes; the shifts ADD and the cross term is positive.

    Either way self terms are N s_x^2/Theta (reducing to the self-Kerr rate
    for a silent second mode).
    """
    N = p.N
    if variant == "two-polarizations":
        if g_b is None or Delta1_b is None:
            raise ValueError("two-polarizations needs g_b and Delta1_b")
        if p.Delta1 == 0 or Delta1_b == 0:
            raise ValueError("Delta1 = 0: cavity detuning pole")
        s_a = p.g**2 / (2.0 * p.Delta1)
        s_b = g_b**2 / (2.0 * Delta1_b)
        sign = -1.0
    elif variant == "two-detunings":
        if delta is None:
            raise ValueError("two-detunings needs delta")
        if p.Delta1 - delta == 0 or p.Delta1 + delta == 0:
            raise ValueError("Delta1 -+ delta = 0: cavity detuning pole")
        s_a = p.g**2 / (2.0 * (p.Delta1 - delta))
        s_b = p.g**2 / (2.0 * (p.Delta1 + delta))
        sign = +1.0
    else:
        raise ValueError(f"unknown cross-Kerr variant {variant!r}")
    return CrossKerrCoefficients(
        kappa_aa=N * s_a**2 / p.Theta,
        kappa_bb=N * s_b**2 / p.Theta,
        kappa_ab=sign * 2.0 * N * s_a * s_b / p.Theta,
    )
