"""Bose-Hubbard builders and the closed-form effective parameters.

The dark-polariton reduction of a driven EIT array gives a one-component
Bose-Hubbard model; keeping the second long-lived polariton gives the
two-component generalization.  All formulas here are closed-form in the
microscopic parameters; the dynamical tests compare them against the full
models.
"""

from dataclasses import dataclass
from math import sqrt

from ..qcore import Factor, Operator, space, PHOTON_MODE, annihilation, number
from .params import (ArrayGeometry, EITAtomParams, LossRates,
                     EffectiveBHParams, check_ratios)
from .lattice import neighbor_pairs
from .cavity import MAX_DIM


def bose_hubbard_hamiltonian(U, J, mu, geometry: ArrayGeometry, cutoff=4,
                             max_dim=MAX_DIM) -> Operator:
    """H = U sum_i n_i(n_i - 1) - J sum_<ij> (b_i' b_j + h.c.) + mu sum_i n_i."""
    labels = [f"b{i}" for i in range(geometry.n_sites)]
    spc = space(*[Factor(lab, PHOTON_MODE, cutoff) for lab in labels])
    if spc.dim > max_dim:
        raise ValueError(f"dimension {spc.dim} exceeds max_dim={max_dim}")
    h = None
    for lab in labels:
        n = number(spc, lab)
        term = U * (n @ n - n) + mu * n
        h = term if h is None else h + term
    for i, j in neighbor_pairs(geometry):
        hop = annihilation(spc, labels[i]).dag() @ annihilation(spc, labels[j])
        h = h - J * (hop + hop.dag())
    return h


def dark_state_bh_params(p: EITAtomParams, geometry: ArrayGeometry,
                         loss: LossRates = LossRates(),
                         n_mean=1.0) -> EffectiveBHParams:
    """Effective parameters of the dark-polariton Bose-Hubbard model.

    U       = -(g24^2/Delta) g^2 Omega^2 / B^4
    J       = hop * Omega^2 / B^2          (hop = 2 omega_C alpha)
    mu      = epsilon g^2 / B^2
    Gamma0  = (Omega^2/B^2) kappa
              + [n_mean >= 2] (g24^2 g^2 Omega^2 / (Delta^2 B^4)) gamma4

    The gamma4 piece needs two polaritons on a site, so it switches on at
    mean filling two.
    """
    if p.Delta == 0:
        raise ValueError("Delta = 0: level-4 pole in U")
    g, Om, B = p.g, p.Omega, p.B
    U = -(p.g24**2 / p.Delta) * g**2 * Om**2 / B**4
    J = geometry.hop * Om**2 / B**2
    mu = p.epsilon * g**2 / B**2
    Gamma0 = (Om**2 / B**2) * loss.kappa
    if n_mean >= 2.0:
        Gamma0 += (p.g24**2 * g**2 * Om**2 / (p.Delta**2 * B**4)) * loss.gamma4
    return EffectiveBHParams(U=U, J=J, mu=mu, Gamma0=Gamma0)


def u_over_gamma0_optimum(g13, kappa, gamma4):
    """Best achievable |U|/Gamma0 and where it sits.

    At fixed couplings the ratio peaks at Delta* = g24 g /(Omega sqrt(kappa
    gamma4))... optimizing over Delta and taking Omega << g with g24 = g13
    gives the ceiling g13 / (2 sqrt(kappa gamma4)).
    """
    return g13 / (2.0 * sqrt(kappa * gamma4))


@dataclass(frozen=True)
class TwoComponentBHParams:
    """Couplings of the two-polariton Bose-Hubbard model (as printed).

    Hopping entries carry the bare dimensionless alpha = hop/(2 omega_C);
    the chemical potentials and interactions are energies.
    """

    mu_b: float
    mu_c: float
    J_bb: float
    J_cc: float
    J_bc: float
    U_b: float
    U_c: float
    U_bc: float
    conversion_active: bool


def two_component_bh_params(p: EITAtomParams,
                            geometry: ArrayGeometry) -> TwoComponentBHParams:
    """Exact parameters of the two-component (b, c) polariton model.

    b = (g S12 - Omega a)/B is the dark mode, c = (Omega S12 + g a)/B the
    bright one at mu_c = -B^2/delta.  Poles of the level-4 elimination are
    rejected: Delta, Delta + 2B^2/delta and Delta + B^2/delta must be
    nonzero.  conversion_active flags |mu_c - mu_b| < |J_bc| (energy units),
    where the b-c cross-hop stops being energetically suppressed.
    """
    if p.delta == 0:
        raise ValueError("delta = 0: bright-polariton energy pole")
    g, Om, B = p.g, p.Omega, p.B
    shift = B**2 / p.delta
    for name, val in (("Delta", p.Delta),
                      ("Delta + 2B^2/delta", p.Delta + 2 * shift),
                      ("Delta + B^2/delta", p.Delta + shift)):
        if val == 0:
            raise ValueError(f"{name} = 0: level-4 elimination pole")
    alpha = geometry.alpha
    mu_b = 0.0
    mu_c = -shift
    J_bb = alpha * g**2 / B**2
    J_cc = alpha * Om**2 / B**2
    J_bc = alpha * g * Om / B**2
    U_b = -p.g24**2 * g**2 * Om**2 / (B**4 * p.Delta)
    U_c = -p.g24**2 * g**2 * Om**2 / (B**4 * (p.Delta + 2 * shift))
    U_bc = -p.g24**2 * (g**2 - Om**2) ** 2 / (B**4 * (p.Delta + shift))
    conversion = abs(mu_c - mu_b) < abs(geometry.hop * g * Om / B**2)
    return TwoComponentBHParams(mu_b=mu_b, mu_c=mu_c, J_bb=J_bb, J_cc=J_cc,
                                J_bc=J_bc, U_b=U_b, U_c=U_c, U_bc=U_bc,
                                conversion_active=conversion)


@dataclass(frozen=True)
class PhotonicKerrFigures:
    """Photon-blockade figures of merit for one strongly-coupled site."""

    U: float
    U_over_kappa: float
    Gamma_full: float
    U_over_Gamma_full: float
    note: str


def photonic_kerr_figures(p: EITAtomParams, loss: LossRates,
                          n_mean=2.0) -> PhotonicKerrFigures:
    """Kerr strength U = g24^2 g^2/(|Delta| Omega^2) and two decay readings.

    U/kappa compares against the bare cavity linewidth; Gamma_full adds the
    level-4 admixture decay (g24 g/(Delta Omega))^2 gamma4 that acts once
    two excitations sit on the site.  Both ratios are reported because they
    differ by orders of magnitude in the strong-coupling corner.
    """
    if p.Delta == 0 or p.Omega == 0:
        raise ValueError("need Delta != 0 and Omega != 0")
    U = p.g24**2 * p.g**2 / (abs(p.Delta) * p.Omega**2)
    gamma_full = loss.kappa
    if n_mean >= 2.0:
        gamma_full += (p.g24 * p.g / (p.Delta * p.Omega)) ** 2 * loss.gamma4
    note = ("U/kappa ignores the two-excitation level-4 decay; "
            "U/Gamma_full includes it")
    return PhotonicKerrFigures(
        U=U,
        U_over_kappa=U / loss.kappa if loss.kappa else float("inf"),
        Gamma_full=gamma_full,
        U_over_Gamma_full=U / gamma_full if gamma_full else float("inf"),
        note=note,
    )


def bh_regime_ratios(p: EITAtomParams, geometry: ArrayGeometry, n_mean=1.0):
    """Validity ratios of the one-component reduction."""
    _, mu_lo, mu_hi = p.polariton_energies()
    gap = min(abs(mu_lo), abs(mu_hi))
    return check_ratios({
        "g24*sqrt(n)/gap": p.g24 * sqrt(max(n_mean, 1.0)) / gap,
        "hop/gap": geometry.hop / gap,
        "U/gap": abs(dark_state_bh_params(p, geometry).U) / gap,
    }, where="dark-state BH reduction")
