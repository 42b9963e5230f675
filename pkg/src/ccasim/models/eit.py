"""Driven four-level ensembles in cavities and their polariton modes.

Each site holds N atoms with levels 1..4: the 1-3 transition couples to the
cavity (g13) and is Raman-split by a classical drive Omega on 2-3; the 2-4
transition couples to the cavity with g24 and supplies the nonlinearity.
Low excitation densities map the collective transitions onto bosons b2, b3,
b4; the optional finite_n flag keeps the first 1/N correction on the
reservoir-coupled transitions instead of dropping it.
"""

from dataclasses import dataclass
from math import sqrt

import numpy as np
import scipy.sparse as sp

from ..qcore import (Factor, SpaceSpec, Operator, space,
                     PHOTON_MODE, COLLECTIVE_MODE,
                     annihilation, number, RestrictedSpace)
from .params import EITAtomParams, ArrayGeometry, check_ratios
from .lattice import neighbor_pairs
from .cavity import MAX_DIM


@dataclass(frozen=True)
class SiteCutoffs:
    """Factor dimensions for one site (each counts levels 0..cutoff-1)."""

    photon: int = 3
    b2: int = 3
    b3: int = 2
    b4: int = 2


def eit_site_space(cutoffs: SiteCutoffs, prefix="") -> SpaceSpec:
    return space(Factor(f"{prefix}ph", PHOTON_MODE, cutoffs.photon),
                 Factor(f"{prefix}b2", COLLECTIVE_MODE, cutoffs.b2),
                 Factor(f"{prefix}b3", COLLECTIVE_MODE, cutoffs.b3),
                 Factor(f"{prefix}b4", COLLECTIVE_MODE, cutoffs.b4))


def _dicke_factor(spc: SpaceSpec, prefix, N):
    """Diagonal sqrt((N - k + 1)/N) with k the atomic excitation count.

    Multiplying a reservoir-coupled lowering operator from the right by this
    diagonal restores the exact collective matrix element sqrt(n (N-k+1))
    of S_1x / sqrt(N) (k evaluated on the source state); clamped to zero
    where the truncated basis holds more excitations than atoms.
    """
    dims = spc.dims
    k = np.zeros(spc.dim)
    for lab, w in ((f"{prefix}b2", 1), (f"{prefix}b3", 1), (f"{prefix}b4", 1)):
        i = spc.index(lab)
        n_i = np.arange(dims[i])
        shape = [1] * len(dims)
        shape[i] = dims[i]
        k = k + np.broadcast_to(n_i.reshape(shape), dims).reshape(-1) * w
    val = np.maximum(N - k + 1, 0.0) / N
    return sp.diags(np.sqrt(val).astype(np.complex128)).tocsr()


def _site_ops(spc: SpaceSpec, prefix, N, finite_n):
    """Annihilation-side operators (a, s2, s3, b4) for one site."""
    a = annihilation(spc, f"{prefix}ph")
    b2 = annihilation(spc, f"{prefix}b2")
    b3 = annihilation(spc, f"{prefix}b3")
    b4 = annihilation(spc, f"{prefix}b4")
    if finite_n:
        d = Operator(spc, _dicke_factor(spc, prefix, N))
        s2 = b2 @ d
        s3 = b3 @ d
    else:
        s2, s3 = b2, b3
    return a, s2, s3, b4


def eit_site_hamiltonian(p: EITAtomParams, cutoffs=SiteCutoffs(),
                         finite_n=False, Omega=None) -> Operator:
    """Single-site Hamiltonian in the frame rotating at the cavity frequency.

    H = eps n2 + delta n3 + (Delta + eps) n4
        + [Omega b2' b3 + g a' s3 + g24 a' b2' b4 + h.c.]

    with g = sqrt(N) g13 and s3 the (optionally 1/N-corrected) collective
    1-3 lowering operator.  `Omega` overrides p.Omega (used by ramps).
    """
    if Omega is None:
        Omega = p.Omega
    spc = eit_site_space(cutoffs)
    a, s2, s3, b4 = _site_ops(spc, "", p.N, finite_n)
    b2 = annihilation(spc, "b2")
    b3 = annihilation(spc, "b3")
    h = (p.epsilon * number(spc, "b2")
         + p.delta * number(spc, "b3")
         + (p.Delta + p.epsilon) * number(spc, "b4"))
    cpl = (Omega * (b2.dag() @ b3)
           + p.g * (a.dag() @ s3)
           + p.g24 * (a.dag() @ b2.dag() @ b4))
    return h + cpl + cpl.dag()


def polariton_operators(p: EITAtomParams, cutoffs=SiteCutoffs(),
                        finite_n=False, spc=None, prefix=""):
    """Annihilation operators of the three one-excitation normal modes.

    Returns {"dark": (op, 0), "lower": (op, (delta-A)/2),
             "upper": (op, (delta+A)/2)}; the dark mode
    p0 = (g s2 - Omega a)/B carries no level-3 weight.
    """
    if spc is None:
        spc = eit_site_space(cutoffs, prefix)
    a, s2, s3, _ = _site_ops(spc, prefix, p.N, finite_n)
    g, Om, B, A, delta = p.g, p.Omega, p.B, p.A, p.delta
    dark = (g / B) * s2 - (Om / B) * a
    out = {"dark": (dark, 0.0)}
    for name, mu in (("lower", (delta - A) / 2.0),
                     ("upper", (delta + A) / 2.0)):
        nrm = sqrt(B**2 + mu**2)
        out[name] = ((g / nrm) * a + (Om / nrm) * s2 + (mu / nrm) * s3, mu)
    return out


def dark_state_coefficients(g, Omega):
    """(c_atom, c_photon) of the dark mode: (g, -Omega)/B."""
    B = sqrt(g**2 + Omega**2)
    return g / B, -Omega / B


# ---- cavity arrays of EIT sites -----------------------------------------

@dataclass
class EITArrayModel:
    """Operator bundle for an array of EIT sites.

    static        -- all site terms except the Omega coupling, plus hopping
    omega_coupling-- sum_i b2_i' b3_i (to be scaled by Omega, + h.c.)
    a, b2, b3, b4 -- per-site annihilation Operators
    space         -- the shared SpaceSpec or RestrictedSpace
    """

    space: object
    static: Operator
    omega_coupling: Operator
    a: list
    b2: list
    b3: list
    b4: list
    params: EITAtomParams
    geometry: ArrayGeometry

    def hamiltonian(self, Omega=None) -> Operator:
        if Omega is None:
            Omega = self.params.Omega
        oc = Omega * self.omega_coupling
        return self.static + oc + oc.dag()

    def dark_polariton_number(self, site, Omega=None) -> Operator:
        """p0' p0 for one site at the given control amplitude."""
        if Omega is None:
            Omega = self.params.Omega
        g = self.params.g
        B = sqrt(g**2 + Omega**2)
        p0 = (g / B) * self.b2[site] - (Omega / B) * self.a[site]
        return p0.dag() @ p0


def eit_array_model(p: EITAtomParams, geometry: ArrayGeometry,
                    cutoffs=SiteCutoffs(), finite_n=False,
                    max_dim=MAX_DIM) -> EITArrayModel:
    """Full product-space model of an EIT-site array (frame: cavity freq)."""
    factors = []
    for i in range(geometry.n_sites):
        factors.extend(eit_site_space(cutoffs, prefix=f"s{i}.").factors)
    spc = SpaceSpec(tuple(factors))
    if spc.dim > max_dim:
        raise ValueError(
            f"product dimension {spc.dim} exceeds max_dim={max_dim}; "
            "raise max_dim explicitly, lower cutoffs, or use "
            "eit_array_model_restricted")
    ops = {"a": [], "b2": [], "b3": [], "b4": []}
    static = None
    omega_coupling = None
    for i in range(geometry.n_sites):
        pre = f"s{i}."
        a, s2, s3, b4 = _site_ops(spc, pre, p.N, finite_n)
        b2 = annihilation(spc, f"{pre}b2")
        b3 = annihilation(spc, f"{pre}b3")
        ops["a"].append(a)
        ops["b2"].append(b2)
        ops["b3"].append(b3)
        ops["b4"].append(b4)
        h_i = (p.epsilon * number(spc, f"{pre}b2")
               + p.delta * number(spc, f"{pre}b3")
               + (p.Delta + p.epsilon) * number(spc, f"{pre}b4"))
        cpl = p.g * (a.dag() @ s3) + p.g24 * (a.dag() @ b2.dag() @ b4)
        h_i = h_i + cpl + cpl.dag()
        static = h_i if static is None else static + h_i
        oc = b2.dag() @ b3
        omega_coupling = oc if omega_coupling is None else omega_coupling + oc
    for i, j in neighbor_pairs(geometry):
        hop = ops["a"][i].dag() @ ops["a"][j]
        static = static + geometry.hop * (hop + hop.dag())
    return EITArrayModel(space=spc, static=static,
                         omega_coupling=omega_coupling,
                         a=ops["a"], b2=ops["b2"], b3=ops["b3"], b4=ops["b4"],
                         params=p, geometry=geometry)


# weighted charge per mode: a photon or a b2/b3 excitation each move one
# quantum; a b4 excitation absorbed one photon AND one b2 quantum
_CHARGE_WEIGHTS = {"ph": 1, "b2": 1, "b3": 1, "b4": 2}


def eit_array_model_restricted(p: EITAtomParams, geometry: ArrayGeometry,
                               excitation_cap, finite_n=False) -> EITArrayModel:
    """Array model on the basis with sum_i (n_ph + n2 + n3 + 2 n4)_i <= cap.

    Every Hamiltonian term conserves the weighted charge and every loss
    channel lowers it, so for initial states at or below the cap this basis
    is exact, at a fraction of the product-space dimension.
    """
    labels, weights = [], []
    for i in range(geometry.n_sites):
        for m, w in _CHARGE_WEIGHTS.items():
            labels.append(f"s{i}.{m}")
            weights.append(w)
    spc = RestrictedSpace(labels, weights, excitation_cap)

    def op(label):
        return Operator(spc, spc.lowering(label))

    def num(label):
        return Operator(spc, spc.number(label))

    if finite_n:
        # excitation count per site over the restricted basis
        def site_dicke(i):
            k = np.array([occ[spc.mode_position(f"s{i}.b2")]
                          + occ[spc.mode_position(f"s{i}.b3")]
                          + occ[spc.mode_position(f"s{i}.b4")]
                          for occ in spc.basis], dtype=float)
            val = np.maximum(p.N - k + 1, 0.0) / p.N
            return Operator(spc, sp.diags(np.sqrt(val).astype(np.complex128)).tocsr())

    ops = {"a": [], "b2": [], "b3": [], "b4": []}
    static = None
    omega_coupling = None
    for i in range(geometry.n_sites):
        a = op(f"s{i}.ph")
        b2 = op(f"s{i}.b2")
        b3 = op(f"s{i}.b3")
        b4 = op(f"s{i}.b4")
        if finite_n:
            d = site_dicke(i)
            s2, s3 = b2 @ d, b3 @ d
        else:
            s2, s3 = b2, b3
        ops["a"].append(a)
        ops["b2"].append(b2)
        ops["b3"].append(b3)
        ops["b4"].append(b4)
        h_i = (p.epsilon * num(f"s{i}.b2")
               + p.delta * num(f"s{i}.b3")
               + (p.Delta + p.epsilon) * num(f"s{i}.b4"))
        cpl = p.g * (a.dag() @ s3) + p.g24 * (a.dag() @ b2.dag() @ b4)
        h_i = h_i + cpl + cpl.dag()
        static = h_i if static is None else static + h_i
        oc = b2.dag() @ b3
        omega_coupling = oc if omega_coupling is None else omega_coupling + oc
    for i, j in neighbor_pairs(geometry):
        hop = ops["a"][i].dag() @ ops["a"][j]
        static = static + geometry.hop * (hop + hop.dag())
    return EITArrayModel(space=spc, static=static,
                         omega_coupling=omega_coupling,
                         a=ops["a"], b2=ops["b2"], b3=ops["b3"], b4=ops["b4"],
                         params=p, geometry=geometry)


@dataclass
class DarkLevel4ArrayModel:
    """Dark polaritons coupled to the collective two-excitation atom mode.

    Keeps, per site, the dark mode d (energy 0) and the level-4 collective
    mode b4 (detuning Delta + epsilon).  The bright polaritons sit at +-B;
    after dropping the terms that rotate at those frequencies the only
    nonlinearity left is b4' d d with amplitude g24*g*Omega/B^2, whose
    perturbative elimination gives the on-site U.  Keeping b4 as a dynamical
    mode retains its real occupation (-2U/Delta per pair) and the associated
    spontaneous-emission loss.
    """

    space: RestrictedSpace
    d: list
    b4: list
    hop_op: object        # sum over bonds of d_i' d_j + h.c. (None if no bonds)
    coupling_op: object   # sum_i b4_i' d_i d_i (scale by g24*g*Omega/B^2)
    number_d: list
    params: EITAtomParams
    geometry: ArrayGeometry


def dark_level4_array_model(p: EITAtomParams, geometry: ArrayGeometry,
                            excitation_cap) -> DarkLevel4ArrayModel:
    """Restricted-basis array of dark modes with explicit level-4 dynamics.

    Charge n_d + 2 n_4 is conserved per the full model's weighting, so the
    cap-restricted basis is exact for initial states at or below the cap.
    """
    labels, weights = [], []
    for i in range(geometry.n_sites):
        labels.extend((f"s{i}.d", f"s{i}.b4"))
        weights.extend((1, 2))
    spc = RestrictedSpace(labels, weights, excitation_cap)
    d = [Operator(spc, spc.lowering(f"s{i}.d"))
         for i in range(geometry.n_sites)]
    b4 = [Operator(spc, spc.lowering(f"s{i}.b4"))
          for i in range(geometry.n_sites)]
    number_d = [Operator(spc, spc.number(f"s{i}.d"))
                for i in range(geometry.n_sites)]
    hop_op = None
    for i, j in neighbor_pairs(geometry):
        bond = d[i].dag() @ d[j]
        bond = bond + bond.dag()
        hop_op = bond if hop_op is None else hop_op + bond
    coupling_op = None
    for i in range(geometry.n_sites):
        c = b4[i].dag() @ d[i] @ d[i]
        coupling_op = c if coupling_op is None else coupling_op + c
    return DarkLevel4ArrayModel(space=spc, d=d, b4=b4, hop_op=hop_op,
                                coupling_op=coupling_op, number_d=number_d,
                                params=p, geometry=geometry)


def eit_regime_ratios(p: EITAtomParams, n_mean=1.0):
    """Dispersive ratios behind the dark-state Bose-Hubbard reduction."""
    _, mu_lo, mu_hi = p.polariton_energies()
    gap = min(abs(mu_lo), abs(mu_hi))
    return check_ratios({
        "g24*sqrt(n)/gap": p.g24 * sqrt(max(n_mean, 1.0)) / gap,
        "epsilon/gap": p.epsilon / gap if p.epsilon else 0.0,
        "two_photon/|Delta|": (p.g24 * p.g * p.Omega / p.B**2) / abs(p.Delta)
        if p.Delta else 0.0,
    }, where="eit-polariton reduction")
