"""Bare cavity builders: single-mode Jaynes-Cummings and photon arrays."""

import scipy.sparse as sp

from ..qcore import (Factor, SpaceSpec, Operator, space,
                     PHOTON_MODE, ATOM_LEVELS,
                     annihilation, number, transition, tensor_product)
from .params import ArrayGeometry
from .lattice import neighbor_pairs

# product-space builders refuse above this unless the caller raises it
MAX_DIM = 200_000


def photon_labels(n_sites):
    return [f"ph{i}" for i in range(n_sites)]


def jaynes_cummings(omega_C, omega_0, g, photon_cutoff=10):
    """H = omega_C a'a + omega_0 |e><e| + g (a'|g><e| + a |e><g|).

    Two-level atom on factor "at" (|g> = 0, |e> = 1), cavity on "ph".
    On resonance the n-excitation doublets split by 2 g sqrt(n).
    """
    sp_ = space(Factor("ph", PHOTON_MODE, photon_cutoff),
                Factor("at", ATOM_LEVELS, 2))
    a = annihilation(sp_, "ph")
    h = (omega_C * number(sp_, "ph")
         + omega_0 * transition(sp_, "at", 1, 1)
         + g * (a.dag() @ transition(sp_, "at", 0, 1)
                + a @ transition(sp_, "at", 1, 0)))
    return h


def cavity_array_space(geometry: ArrayGeometry, photon_cutoff, max_dim=MAX_DIM):
    factors = [Factor(lab, PHOTON_MODE, photon_cutoff)
               for lab in photon_labels(geometry.n_sites)]
    spc = space(*factors)
    if spc.dim > max_dim:
        raise ValueError(
            f"product dimension {spc.dim} exceeds max_dim={max_dim}; "
            "raise max_dim explicitly or lower the cutoff")
    return spc

def cavity_array_hamiltonian(geometry: ArrayGeometry, photon_cutoff=4,
                             include_zero_point=True, max_dim=MAX_DIM):
    """Tight-binding photon Hamiltonian of the cavity array.

    H = omega_C sum_R (n_R + 1/2) + hop sum_<RR'> (a'_R a_R' + h.c.)
    with hop = 2 omega_C alpha.  One-excitation eigenvalues relative to the
    vacuum reproduce the normal-mode frequencies from the lattice module.
    """
    spc = cavity_array_space(geometry, photon_cutoff, max_dim)
    labels = photon_labels(geometry.n_sites)
    h = None
    for lab in labels:
        term = geometry.omega_C * number(spc, lab)
        h = term if h is None else h + term
    if include_zero_point:
        zp = 0.5 * geometry.omega_C * geometry.n_sites
        h = h + Operator(spc, sp.identity(spc.dim, format="csr") * zp)
    for i, j in neighbor_pairs(geometry):
        ai = annihilation(spc, labels[i])
        aj = annihilation(spc, labels[j])
        hop = ai.dag() @ aj
        h = h + geometry.hop * (hop + hop.dag())
    return h
