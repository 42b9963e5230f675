"""Lattice helpers: bonds, hopping matrices, normal modes, resolvent sums."""

import numpy as np

from .params import ArrayGeometry


def neighbor_pairs(geometry: ArrayGeometry):
    """Unique nearest-neighbour bonds (i, j) with i < j."""
    n = geometry.n_sites
    pairs = [(i, i + 1) for i in range(n - 1)]
    if geometry.topology == "chain-periodic" and n > 2:
        pairs.append((0, n - 1))
    # n = 2 periodic would double-count the single bond
    return pairs


def adjacency(geometry: ArrayGeometry):
    n = geometry.n_sites
    t = np.zeros((n, n))
    for i, j in neighbor_pairs(geometry):
        t[i, j] = t[j, i] = 1.0
    return t


def hop_matrix(geometry: ArrayGeometry):
    """Single-particle photon matrix M = omega_C I + hop * adjacency."""
    n = geometry.n_sites
    return geometry.omega_C * np.eye(n) + geometry.hop * adjacency(geometry)


def normal_modes(geometry: ArrayGeometry):
    """(omega_k, v) with columns v[:, k] the photon normal modes.

    For a periodic chain omega_k = omega_C + 2 hop cos k; the open chain
    gets the sine-basis analogue.  v is real orthogonal.
    """
    w, v = np.linalg.eigh(hop_matrix(geometry))
    return w, v


def resolvent(geometry: ArrayGeometry, omega):
    """G(omega) = (omega - M)^(-1) for the single-photon sector."""
    n = geometry.n_sites
    m = hop_matrix(geometry)
    return np.linalg.inv(omega * np.eye(n) - m)


def gamma_onsite(geometry: ArrayGeometry, omega):
    """Site-averaged diagonal resolvent (1/n) sum_j G_jj(omega).

    Equals (1/n) sum_k 1/(omega - omega_k); for translation-invariant
    lattices every site gives the same value, for open chains the average
    keeps the mode-sum identity exact.
    """
    g = resolvent(geometry, omega)
    return float(np.trace(g).real) / geometry.n_sites


def gamma_bond(geometry: ArrayGeometry, omega):
    """Bond-averaged off-diagonal resolvent: mean of G_ij over bonds.

    Periodic-chain limit: (1/n) sum_k e^{ik}/(omega - omega_k).
    """
    g = resolvent(geometry, omega)
    pairs = neighbor_pairs(geometry)
    if not pairs:
        raise ValueError("geometry has no bonds")
    return float(np.mean([g[i, j].real for i, j in pairs]))
