"""Complete default configs for every experiment, as annotated YAML.

Each template reproduces the corresponding desk-scale experiment out of the
box; `ccasim defaults <name>` prints it for editing.  Unit-suffixed keys
(`_s^-1`, `_MHz`, `_GHz`) are converted to angular s^-1 on load.
"""

import yaml

from .config import EXPERIMENTS, ConfigError, Issue

_TEMPLATES = {}

_TEMPLATES["mott-superfluid"] = """\
# Three coupled cavities, each holding a driven four-level ensemble: ramp
# the control field so the polariton lattice crosses from the
# interaction-dominated to the hopping-dominated regime, and compare
# on-site number fluctuations of the array model against the effective
# lattice model it reduces to.
experiment: mott-superfluid
params:
  g13_s^-1: 2.5e+9        # single-atom cavity coupling, 1-3 dipole
  g24_s^-1: 2.5e+9        # single-atom cavity coupling, 2-4 dipole
  N: 1000                 # atoms per site; collective g = sqrt(N) g13
  Delta_s^-1: -2.0e+10    # level-4 detuning (sets the interaction sign)
  Omega_start_s^-1: 7.9e+10   # control amplitude, interaction-dominated end
  Omega_end_s^-1: 1.1e+12     # control amplitude, hopping-dominated end
  hop_s^-1: 1.1e+7        # photon tunneling between neighboring cavities
  n_sites: 3
  duration_s: 1.5e-6      # ramp time
  kappa_s^-1: 4.0e+4      # cavity field decay
  gamma3_s^-1: 1.6e+7     # level-3 spontaneous emission
  gamma4_s^-1: 1.6e+7     # level-4 spontaneous emission
numerics:
  excitation_cap: 3       # joint weighted-excitation cap of the array basis
  bh_cutoff: 4            # per-site Fock cutoff of the effective lattice
  output_grid_points: 400
  n_trajectories: 0       # 0 = deterministic conditional (no-jump) run
  seed: 1789
  rtol: 1.0e-8
output:
  path: mott_superfluid.csv
  format: csv
"""

_TEMPLATES["two-component-sweep"] = """\
# Closed-form parameters of the two-species polariton lattice as the
# control amplitude sweeps across the coupling; rates are quoted in units
# of g13, so the sweep is dimensionless physics (no dynamics is run).
experiment: two-component-sweep
params:
  g13_s^-1: 1.0           # unit coupling: all outputs scale with g13
  g24_s^-1: 1.0
  N: 1000
  Delta_s^-1: -0.05       # -g13/20
  delta_s^-1: 63245.553203367586   # 2000 sqrt(N) g13: bright mode far detuned
  Omega_start_s^-1: 1.0
  Omega_end_s^-1: 100.0
  hop_s^-1: 0.1           # 2 omega_C alpha with alpha = 0.1
  omega_C_s^-1: 0.5       # normalization making alpha = hop/(2 omega_C) = 0.1
  n_sites: 2
numerics:
  sweep_points: 100
output:
  path: two_component_sweep.csv
  format: csv
"""

_TEMPLATES["kerr-validate"] = """\
# Echoed dispersive protocol on one cavity: the pulse windows rotate the
# number-linear Stark shift away, leaving a pure Kerr phase.  Columns: X
# (overlap magnitude, 1 = no leakage), Y (phase-referenced overlap) and
# the closed-form Y_ideal = cos(kappa_eff n^2 t).
experiment: kerr-validate
params:
  g_s^-1: 1.0e+8          # cavity coupling on the 0-2 transition
  Lambda_s^-1: 5.0e+8     # Raman drive amplitude
  Delta1_s^-1: 1.0e+9     # cavity detuning (10 g)
  Delta2_s^-1: 5.0e+9     # Raman detuning: two-photon rate Theta = g
  Omega_pulse_s^-1: 1.0e+10   # fast local qubit pulses framing the windows
  N: 1                    # atoms in the cavity
  n_init: 2               # Fock state whose Kerr phase is read out
  t_max_s: 3.2e-6         # about two periods of the ideal signal
numerics:
  output_grid_points: 400
output:
  path: kerr_validate.csv
  format: csv
"""

_TEMPLATES["kerr-noise"] = """\
# Same echoed protocol with cavity decay, spontaneous emission and qubit
# dephasing folded in at the dispersive level: Y keeps oscillating at the
# Kerr rate while its peak envelope decays.
experiment: kerr-noise
params:
  g_s^-1: 1.0e+9
  Lambda_s^-1: 2.0e+9
  Delta1_s^-1: 2.0e+10    # 10 Lambda
  Delta2_s^-1: 1.0e+10    # 5 Lambda
  Omega_pulse_s^-1: 1.0e+11
  N: 1
  n_init: 3
  kappa_s^-1: 1.0e+6      # cavity decay
  gamma_s^-1: 1.0e+6      # excited-level spontaneous emission
  dephasing_s^-1: 1.0e+3  # qubit dephasing
  t_max_s: 2.4e-6         # several oscillation periods
numerics:
  output_grid_points: 400
output:
  path: kerr_noise.csv
  format: csv
"""

_TEMPLATES["spin-xy"] = """\
# Two atoms in coupled cavities, Raman-driven so the qubit chain evolves
# under alternating flip-flop (xx+yy) and Ising (zz) windows; the full
# atom-cavity integration runs side by side with the effective spin chain.
experiment: spin-xy
params:
  omega_e_GHz: 1.0e+6     # optical transition frequency
  omega_ab_GHz: 30.0      # qubit splitting
  Delta_a_GHz: 30.0       # flip-flop laser detuning from a<->e
  Omega_a_GHz: 2.0        # Rabi amplitudes of the flip-flop pair
  Omega_b_GHz: 2.0
  g_a_GHz: 1.0            # cavity couplings of the two optical transitions
  g_b_GHz: 1.0
  delta1_GHz: -0.0165     # two-photon offset; alternate working point -0.0168
  hop_GHz: 0.2            # photon tunneling between the cavities
  omega_C_GHz: 999942.0   # cavity placed 58 GHz below the transition
  n_sites: 2
  zz_Delta_a_GHz: 60.0    # Ising-sector detuning of the Omega pair
  zz_Delta_tilde_a_GHz: 15.0   # Ising-sector detuning of the Lambda pair
  zz_Lambda_a_GHz: 0.71
  zz_Lambda_b_GHz: 0.71
  window1_s: 5.0e-7       # flip-flop window of each alternation cycle
  window2_s: 5.0e-7       # Ising window
  n_cycles: 40            # 40 us total
numerics:
  photon_cutoff: 2
  output_grid_points: 400
output:
  path: spin_xy.csv
  format: csv
"""

_TEMPLATES["cluster"] = """\
# Three-site chain under a pure Ising drive: starting from all spins along
# +x, the zz bond builds graph-state entanglement.  The cavity frequency is
# solved so the bond strength hits Jz_target exactly; single-site entropy
# (in multiples of ln 2) and whole-chain purity are tracked in time.
experiment: cluster
params:
  omega_e_GHz: 1.0e+6
  omega_ab_GHz: 12.0
  Delta_a_GHz: 24.0       # Omega-laser detuning from a<->e (b<->e sees 12)
  Delta_tilde_a_GHz: 15.0 # inert while Lambda = 0, but kept off omega_ab
  Omega_a_GHz: 2.0
  Omega_b_GHz: 2.0
  Lambda_a_GHz: 0.0       # single laser pair: second Raman leg off
  Lambda_b_GHz: 0.0
  g_a_GHz: 1.0
  g_b_GHz: 1.0
  hop_GHz: 0.2
  n_sites: 3
  Jz_target_GHz: 2.1e-5   # 0.021 MHz bond; cavity placement is solved for it
  duration_s: 4.5e-5      # covers the pi/(4 Jz) cluster time
numerics:
  photon_cutoff: 2
  output_grid_points: 400
output:
  path: cluster.csv
  format: csv
"""

_TEMPLATES["stirap-check"] = """\
# Single driven site: ramp the control field down so the dark polariton is
# transferred onto the metastable level.  Slow ramps follow adiabatically
# (final n2 near 1); fast ramps leak into the bright modes.
experiment: stirap-check
params:
  g13_s^-1: 1.0e+9
  N: 1
  Omega_s^-1: 2.0e+9      # control amplitude before switch-off
  g24_s^-1: 0.0           # nonlinearity off: pure state-transfer check
  Delta_s^-1: 0.0
  delta_s^-1: 0.0
  ramp_duration_s: 1.0e-7
numerics:
  output_grid_points: 400
output:
  path: stirap_check.csv
  format: csv
"""

_TEMPLATES["params"] = """\
# Closed-form effective parameters only (no dynamics): JSON summary with
# the lattice-model constants and regime-condition ratios for the chosen
# model family (dark-state-bh, two-component, photonic-kerr,
# dispersive-kerr or spin).
experiment: params
params:
  family: dark-state-bh
  g13_s^-1: 2.5e+9
  g24_s^-1: 2.5e+9
  N: 1000
  Delta_s^-1: -2.0e+10
  Omega_s^-1: 7.9e+10
  hop_s^-1: 1.1e+7
  n_sites: 3
  kappa_s^-1: 4.0e+4
  gamma3_s^-1: 1.6e+7
  gamma4_s^-1: 1.6e+7
output:
  path: params.json
  format: json
"""


def defaults_yaml(experiment) -> str:
    """The annotated YAML default config for one experiment."""
    if experiment not in _TEMPLATES:
        raise ConfigError([Issue("error", "experiment",
                                 f"unknown experiment {experiment!r}; "
                                 f"choose one of {', '.join(EXPERIMENTS)}")])
    return _TEMPLATES[experiment]


def emit_defaults(experiment) -> dict:
    """The default config as a parsed mapping."""
    return yaml.safe_load(defaults_yaml(experiment))
