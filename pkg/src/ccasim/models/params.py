"""Parameter containers for the model builders.

All frequencies and rates are angular (rad/s) throughout the package; the
CLI layer converts unit-suffixed config entries before they reach these
types.  Derived quantities that appear in many closed forms (collective
coupling g = sqrt(N) g13, B, A, the polariton energies) live here as
properties so every module spells them identically.
"""

import logging
from dataclasses import dataclass, field
from math import sqrt

log = logging.getLogger(__name__)

# dispersive-expansion ratios above this trigger a regime warning
RATIO_WARN = 0.1


@dataclass(frozen=True)
class ArrayGeometry:
    """Cavity lattice: n_sites, topology, photon hop J_C = 2 omega_C alpha."""

    n_sites: int
    topology: str = "chain-open"   # "chain-open" | "chain-periodic"
    hop: float = 0.0
    omega_C: float = 0.0           # bare cavity frequency (0 = unspecified)

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if self.topology not in ("chain-open", "chain-periodic"):
            raise ValueError(f"unknown topology {self.topology!r}")

    @property
    def alpha(self):
        """Dimensionless hop ratio alpha = hop / (2 omega_C)."""
        if self.omega_C == 0.0:
            raise ValueError("geometry omega_C unset; cannot recover alpha")
        return self.hop / (2.0 * self.omega_C)


@dataclass(frozen=True)
class EITAtomParams:
    """One ensemble of N four-level atoms in one cavity.

    Levels: 1 ground reservoir, 2 metastable, 3 and 4 excited.  g13 and g24
    are single-atom couplings on the 1-3 and 2-4 dipoles, Omega drives 2-3,
    Delta is the 2-4 two-photon detuning, delta the 1-3 one, epsilon the
    level-2 offset.
    """

    g13: float
    g24: float
    Omega: float
    Delta: float
    delta: float = 0.0
    epsilon: float = 0.0
    N: int = 1
    omega_C: float = 0.0

    @property
    def g(self):
        """Collective coupling sqrt(N) g13."""
        return sqrt(self.N) * self.g13

    @property
    def B(self):
        return sqrt(self.g**2 + self.Omega**2)

    @property
    def A(self):
        return sqrt(4.0 * self.B**2 + self.delta**2)

    def polariton_energies(self):
        """(mu0, mu_plus, mu_minus) = (0, (delta-A)/2, (delta+A)/2)."""
        return 0.0, (self.delta - self.A) / 2.0, (self.delta + self.A) / 2.0


@dataclass(frozen=True)
class LossRates:
    kappa: float = 0.0       # cavity field decay
    gamma3: float = 0.0      # level-3 spontaneous emission
    gamma4: float = 0.0      # level-4 spontaneous emission
    dephasing: float = 0.0   # metastable-level dephasing

    def __post_init__(self):
        for name in ("kappa", "gamma3", "gamma4", "dephasing"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


@dataclass(frozen=True)
class KerrParams:
    """Three-level self-Kerr scheme: cavity on 0-2, Raman ladder on (0,1)-2."""

    g: float
    Lambda: float
    Delta1: float
    Delta2: float
    N: int = 1
    Omega_pulse: float = 0.0

    @property
    def Theta(self):
        """Raman two-photon rate 2 Lambda^2 / Delta2."""
        if self.Delta2 == 0:
            raise ValueError("Delta2 = 0: Raman detuning pole")
        return 2.0 * self.Lambda**2 / self.Delta2

    @property
    def kappa_eff(self):
        """Self-Kerr strength N g^4 / (4 Delta1^2 Theta)."""
        if self.Delta1 == 0:
            raise ValueError("Delta1 = 0: cavity detuning pole")
        return self.N * self.g**4 / (4.0 * self.Delta1**2 * self.Theta)

    @property
    def mu_angle(self):
        """Disentangling rotation rate g^2 / (Delta1 Theta)."""
        return self.g**2 / (self.Delta1 * self.Theta)


@dataclass(frozen=True)
class EffectiveBHParams:
    U: float
    J: float
    mu: float
    Gamma0: float = 0.0


@dataclass(frozen=True)
class EffectiveSpinParams:
    B: float = 0.0
    B_tilde: float = 0.0
    J1: float = 0.0
    J2: float = 0.0
    Jx: float = 0.0
    Jy: float = 0.0
    Jz: float = 0.0

    @property
    def B_tot(self):
        return self.B + self.B_tilde


def check_ratios(ratios, where="", threshold=RATIO_WARN):
    """Log a warning for each dispersive ratio above threshold.

    Returns {name: (value, ok)} so callers can surface the flags verbatim.
    """
    out = {}
    for name, val in ratios.items():
        ok = abs(val) <= threshold
        out[name] = (val, ok)
        if not ok:
            log.warning("regime ratio %s = %.3g exceeds %.2g %s",
                        name, val, threshold, f"({where})" if where else "")
    return out
