"""Physical models: full atom-cavity Hamiltonians and their effective limits."""

from .bose_hubbard import (
    PhotonicKerrFigures,
    TwoComponentBHParams,
    bh_regime_ratios,
    bose_hubbard_hamiltonian,
    dark_state_bh_params,
    photonic_kerr_figures,
    two_component_bh_params,
    u_over_gamma0_optimum,
)
from .cavity import (
    cavity_array_hamiltonian,
    cavity_array_space,
    jaynes_cummings,
    photon_labels,
)
from .collapse import (
    damped_cavity_channel,
    dark_polariton_channels,
    eit_collapse_channels,
    kerr_noise_channels,
    spin_loss_channels,
)
from .eit import (
    EITArrayModel,
    SiteCutoffs,
    dark_state_coefficients,
    eit_array_model,
    eit_array_model_restricted,
    eit_regime_ratios,
    eit_site_hamiltonian,
    eit_site_space,
    polariton_operators,
)
from .kerr import (
    CrossKerrCoefficients,
    KerrMedium,
    cavity_term,
    cross_kerr_coefficients,
    first_zero_time,
    ideal_kerr_signal,
    kerr_condition_ratios,
    kerr_initial_ket,
    kerr_medium,
    kerr_phase_rate,
    pulse_duration,
    qubit_pulse_term,
    raman_term,
)
from .lattice import (
    adjacency,
    gamma_bond,
    gamma_onsite,
    hop_matrix,
    neighbor_pairs,
    normal_modes,
    resolvent,
)
from .params import (
    ArrayGeometry,
    EffectiveBHParams,
    EffectiveSpinParams,
    EITAtomParams,
    KerrParams,
    LossRates,
    check_ratios,
)
from .spins import (
    SpinArrayModel,
    SpinDecayRates,
    XYDrive,
    ZZDrive,
    combine_spin_params,
    ising_drive_ratio,
    solve_cavity_frequency_for_jz,
    spin_array_space,
    spin_chain_hamiltonian,
    spin_chain_space,
    spin_decay_rates,
    spin_down_projector,
    spin_product_ket,
    xy_effective_params,
    xy_full_model,
    xy_regime_ratios,
    zz_effective_params,
    zz_full_model,
)

__all__ = [n for n in dir() if not n.startswith("_")]
