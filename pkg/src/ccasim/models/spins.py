"""Effective spin-1/2 chains from Raman-driven three-level atoms in a cavity array.

One atom per cavity, levels |a>, |b> (stable) and |e> (excited).  Two drive
schemes produce the two halves of an XXYZZ chain:

* xy sector — two lasers, one per transition, split by 2(omega_ab - delta1).
  Virtual photon exchange gives flip-flop (J1) and double-flip (J2) bonds,
  i.e. Jx = (J1+J2)/2, Jy = (J1-J2)/2, plus a sigma^z field B.
* zz sector — two lasers sharing both transitions (Rabi pairs Omega_a/Omega_b
  and Lambda_a/Lambda_b).  The interference of the two Raman paths leaves a
  pure sigma^z sigma^z bond Jz and a field B_tilde.

Because the photon that mediates a bond is a superposition of array normal
modes, every cavity weight in the formulas is a resolvent element of the
actual hopping matrix (see lattice.gamma_onsite / gamma_bond), evaluated at
the frequency of the virtual photon: the laser frequency for single-laser
processes, the mean laser frequency for the xy exchange.
"""

from dataclasses import dataclass, field

import numpy as np

from ..qcore import (
    ATOM_LEVELS,
    PHOTON_MODE,
    SPIN_HALF,
    Factor,
    Ket,
    Operator,
    SpaceSpec,
    annihilation,
    product_ket,
    space,
    transition,
)
from .lattice import (gamma_bond, gamma_onsite, hop_matrix, neighbor_pairs,
                      normal_modes)
from .params import ArrayGeometry, EffectiveSpinParams, check_ratios

# atomic level ordering used throughout this module
LEVEL_A, LEVEL_B, LEVEL_E = 0, 1, 2

_LEVELS = {"a": LEVEL_A, "b": LEVEL_B, "e": LEVEL_E}


# ---------------------------------------------------------------------------
# drive bundles


@dataclass(frozen=True)
class XYDrive:
    """Two-laser flip-flop drive.

    Laser a sits Delta_a below the a<->e transition; laser b is placed so the
    two-photon (Raman) detuning is 2*delta1, i.e. the laser splitting is
    2*(omega_ab - delta1).  All frequencies are angular, same unit as Omega/g.
    """

    omega_e: float      # a<->e transition frequency
    omega_ab: float     # a<->b splitting
    Delta_a: float      # laser-a detuning from a<->e
    Omega_a: float      # Rabi frequency of laser a (H = Omega/2 |e><a| + h.c.)
    Omega_b: float
    g_a: float          # cavity couplings of the two transitions
    g_b: float
    delta1: float = 0.0
    geometry: ArrayGeometry = field(
        default_factory=lambda: ArrayGeometry(2, hop=0.0, omega_C=1.0)
    )

    @property
    def Delta_b(self):
        # detuning of laser b from b<->e in the frame E_b = omega_ab - delta1
        return self.Delta_a + self.omega_ab - self.delta1

    @property
    def omega_laser_a(self):
        return self.omega_e - self.Delta_a

    @property
    def omega_laser_b(self):
        return self.omega_laser_a - 2.0 * (self.omega_ab - self.delta1)

    @property
    def omega_mean(self):
        # frequency of the virtual photon carrying the flip-flop bond
        return 0.5 * (self.omega_laser_a + self.omega_laser_b)


@dataclass(frozen=True)
class ZZDrive:
    """Shared-frequency Raman pair generating a pure sigma^z sigma^z bond.

    One laser at omega_e - Delta_a couples to both transitions with Rabi
    frequencies Omega_a / Omega_b; a second at omega_e - Delta_tilde_a with
    Lambda_a / Lambda_b.  Detunings from b<->e follow as Delta_x - omega_ab.
    """

    omega_e: float
    omega_ab: float
    Delta_a: float          # Omega-laser detuning from a<->e
    Delta_tilde_a: float    # Lambda-laser detuning from a<->e
    Omega_a: float
    Omega_b: float
    Lambda_a: float
    Lambda_b: float
    g_a: float
    g_b: float
    geometry: ArrayGeometry = field(
        default_factory=lambda: ArrayGeometry(2, hop=0.0, omega_C=1.0)
    )

    @property
    def Delta_b(self):
        return self.Delta_a - self.omega_ab

    @property
    def Delta_tilde_b(self):
        return self.Delta_tilde_a - self.omega_ab

    @property
    def omega_laser(self):
        return self.omega_e - self.Delta_a

    @property
    def nu_laser(self):
        return self.omega_e - self.Delta_tilde_a


# ---------------------------------------------------------------------------
# effective parameters


def _guard_poles(pairs, where):
    for name, val in pairs:
        if val == 0.0:
            raise ValueError(f"{where}: denominator {name} vanishes")


def xy_effective_params(drive: XYDrive) -> EffectiveSpinParams:
    """Field and exchange of the flip-flop sector.

    B collects the differential Stark shifts of |a> and |b> — each laser's
    own shift, the cross-laser shift, the cavity Lamb shift at the laser
    frequency, and the fourth-order cavity shift at the mean frequency.
    """
    d = drive
    _guard_poles(
        [("Delta_a", d.Delta_a), ("Delta_b", d.Delta_b),
         ("Delta_a - Delta_b", d.Delta_a - d.Delta_b)],
        "xy_effective_params",
    )
    geo = d.geometry
    gam_mean = gamma_onsite(geo, d.omega_mean)
    gam_a = gamma_onsite(geo, d.omega_laser_a)
    gam_b = gamma_onsite(geo, d.omega_laser_b)
    gam2 = gamma_bond(geo, d.omega_mean)

    def stark(Om_s, Om_o, D_s, D_o, g_s, g_o, gam_s):
        # net light shift seen through transition s; o marks the other one
        inner = (
            D_s
            - abs(Om_s) ** 2 / (4.0 * D_s)
            - abs(Om_o) ** 2 / (4.0 * (D_o - D_s))
            - gam_s * g_s**2
            - gam_mean * g_o**2
            + gam_mean**2 * g_o**4 / D_s
        )
        return abs(Om_s) ** 2 / (4.0 * D_s**2) * inner

    shift_b = stark(d.Omega_b, d.Omega_a, d.Delta_b, d.Delta_a, d.g_b, d.g_a, gam_b)
    shift_a = stark(d.Omega_a, d.Omega_b, d.Delta_a, d.Delta_b, d.g_a, d.g_b, gam_a)
    B = 0.5 * d.delta1 - 0.5 * (shift_b - shift_a)

    J1 = 0.25 * gam2 * (
        abs(d.Omega_a) ** 2 * d.g_b**2 / d.Delta_a**2
        + abs(d.Omega_b) ** 2 * d.g_a**2 / d.Delta_b**2
    )
    J2 = 0.5 * gam2 * d.Omega_a * d.Omega_b * d.g_a * d.g_b / (d.Delta_a * d.Delta_b)
    return EffectiveSpinParams(
        B=B, J1=J1, J2=J2, Jx=0.5 * (J1 + J2), Jy=0.5 * (J1 - J2)
    )


def zz_effective_params(drive: ZZDrive) -> EffectiveSpinParams:
    """Field and bond of the shared-frequency Raman sector.

    The bond survives only when the two Raman amplitudes differ:
    Jz = gamma_2 |Omega_b g_b / 4 Delta_b - Omega_a g_a / 4 Delta_a|^2.
    The field B_tilde is the fourth-order differential Stark shift; note the
    Lambda bracket carries no gamma^2 g^4 piece (that path closes through the
    Omega laser only).
    """
    d = drive
    D = {"a": d.Delta_a, "b": d.Delta_b}
    Dt = {"a": d.Delta_tilde_a, "b": d.Delta_tilde_b}
    Om = {"a": d.Omega_a, "b": d.Omega_b}
    Lam = {"a": d.Lambda_a, "b": d.Lambda_b}
    g = {"a": d.g_a, "b": d.g_b}
    _guard_poles(
        [("Delta_a", D["a"]), ("Delta_b", D["b"]),
         ("Delta_tilde_a", Dt["a"]), ("Delta_tilde_b", Dt["b"]),
         ("Delta_a - Delta_b", D["a"] - D["b"]),
         ("Delta_tilde_a - Delta_tilde_b", Dt["a"] - Dt["b"])]
        + [(f"Delta_{j} - Delta_tilde_{x}", D[j] - Dt[x])
           for j in "ab" for x in "ab"],
        "zz_effective_params",
    )
    geo = d.geometry

    def gam(laser_freq, j, x):
        # cavity weight for a photon emitted on transition j while the Raman
        # chain dresses transition x: the frequency shifts by one splitting
        # per index mismatch
        shift = d.omega_ab * ((x == "b") - (j == "b"))
        return gamma_onsite(geo, laser_freq + shift)

    def lam_bracket(s):
        o = "b" if s == "a" else "a"
        inner = 4.0 * Dt[s] - abs(Lam[o]) ** 2 / (Dt[o] - Dt[s]) - abs(Lam[s]) ** 2 / Dt[s]
        for j in ("a", "b"):
            inner -= abs(Om[j]) ** 2 / (D[j] - Dt[s]) + 4.0 * gam(d.nu_laser, j, s) * g[j] ** 2
        return abs(Lam[s]) ** 2 / (16.0 * Dt[s] ** 2) * inner

    def om_bracket(s):
        o = "b" if s == "a" else "a"
        inner = 4.0 * D[s] - abs(Om[o]) ** 2 / (D[o] - D[s]) - abs(Om[s]) ** 2 / D[s]
        for j in ("a", "b"):
            inner -= abs(Lam[j]) ** 2 / (Dt[j] - D[s]) + 4.0 * gam(d.omega_laser, j, s) * g[j] ** 2
        inner += 4.0 * gam(d.omega_laser, s, s) ** 2 * g[s] ** 4 / D[s]
        return abs(Om[s]) ** 2 / (16.0 * D[s] ** 2) * inner

    B_tilde = -0.5 * (
        (lam_bracket("b") + om_bracket("b")) - (lam_bracket("a") + om_bracket("a"))
    )

    gam2 = gamma_bond(geo, d.omega_laser)
    Jz = gam2 * abs(
        Om["b"] * g["b"] / (4.0 * D["b"]) - Om["a"] * g["a"] / (4.0 * D["a"])
    ) ** 2
    return EffectiveSpinParams(B_tilde=B_tilde, Jz=Jz)


def combine_spin_params(xy: EffectiveSpinParams, zz: EffectiveSpinParams):
    return EffectiveSpinParams(
        B=xy.B, B_tilde=zz.B_tilde, J1=xy.J1, J2=xy.J2,
        Jx=xy.Jx, Jy=xy.Jy, Jz=zz.Jz,
    )


def ising_drive_ratio(drive: XYDrive):
    """|Omega_a/Omega_b| at which J2 = J1 so the sigma^y sigma^y bond closes.

    At Omega_a = +ratio * Omega_b the chain is pure Ising (sigma^x sigma^x);
    the opposite sign kills sigma^x sigma^x instead.  Sending one Omega to
    zero gives the isotropic XY point J2 = 0.
    """
    return (drive.Delta_a * drive.g_a) / (drive.Delta_b * drive.g_b)


def xy_regime_ratios(drive: XYDrive, warn=True):
    d = drive
    # worst-case photon admixture: nearest normal mode to the mean
    # two-photon frequency sets the smallest virtual detuning
    w, _ = normal_modes(d.geometry)
    det = float(np.min(np.abs(d.omega_mean - w)))
    ratios = {
        "Omega_a/Delta_a": abs(d.Omega_a) / abs(d.Delta_a),
        "Omega_b/Delta_b": abs(d.Omega_b) / abs(d.Delta_b),
        "g_a/min|omega-omega_k|": d.g_a / det if det else np.inf,
        "g_b/min|omega-omega_k|": d.g_b / det if det else np.inf,
    }
    return check_ratios(ratios, "xy drive") if warn else ratios


# ---------------------------------------------------------------------------
# effective chain Hamiltonian


def spin_chain_space(n_sites) -> SpaceSpec:
    return space(*(Factor(f"s{i}", SPIN_HALF, 2) for i in range(n_sites)))


def _paulis(sp, label):
    up = transition(sp, label, 1, 0)  # |b> maps to spin-up
    dn = transition(sp, label, 0, 1)
    sx = up + dn
    sy = (-1j) * up + 1j * dn
    sz = transition(sp, label, 1, 1) - transition(sp, label, 0, 0)
    return sx, sy, sz


def spin_chain_hamiltonian(params: EffectiveSpinParams, geometry: ArrayGeometry,
                           field=None) -> Operator:
    """H = sum_i field sigma^z_i + sum_<ij> Jx sx sx + Jy sy sy + Jz sz sz.

    `field` defaults to params.B_tot; pass an explicit value when the two
    drive sectors are interleaved and only part of the field is active.
    """
    n = geometry.n_sites
    sp = spin_chain_space(n)
    if field is None:
        field = params.B_tot
    pauli = [_paulis(sp, f"s{i}") for i in range(n)]
    H = field * pauli[0][2]
    for i in range(1, n):
        H = H + field * pauli[i][2]
    for i, j in neighbor_pairs(geometry):
        sxi, syi, szi = pauli[i]
        sxj, syj, szj = pauli[j]
        H = H + params.Jx * (sxi @ sxj) + params.Jy * (syi @ syj) \
            + params.Jz * (szi @ szj)
    return H


def spin_down_projector(sp: SpaceSpec, site):
    """|down><down| on one chain site (image of |a> under the spin mapping)."""
    return transition(sp, f"s{site}", 0, 0)


def spin_product_ket(sp: SpaceSpec, site_amps) -> Ket:
    """Product state from per-site (amp_down, amp_up) pairs."""
    vecs = [np.asarray(a, dtype=complex) for a in site_amps]
    return product_ket(sp, vecs)


# ---------------------------------------------------------------------------
# full atom-cavity model


@dataclass(frozen=True)
class SpinArrayModel:
    """Atom-cavity array in the flat-photon rotating frame.

    The frame removes omega_C from every photon mode (the hop term survives
    unchanged) and the atomic energies, with E_b = omega_ab - frame_delta1.
    `terms` is ready to drop into a Segment; all drive phases are exact
    functions of global time.
    """

    space: SpaceSpec
    terms: tuple
    geometry: ArrayGeometry
    frame_delta1: float = 0.0

    @property
    def n_sites(self):
        return self.geometry.n_sites

    def population(self, site, level) -> Operator:
        lvl = _LEVELS[level] if isinstance(level, str) else level
        return transition(self.space, f"a{site}", lvl, lvl)

    def sigma_z(self, site) -> Operator:
        return self.population(site, "b") - self.population(site, "a")

    def excited_population(self) -> Operator:
        out = self.population(0, "e")
        for i in range(1, self.n_sites):
            out = out + self.population(i, "e")
        return out

    def photon_number(self) -> Operator:
        from ..qcore import number

        out = number(self.space, "p0")
        for i in range(1, self.n_sites):
            out = out + number(self.space, f"p{i}")
        return out

    def atom_product_ket(self, site_amps) -> Ket:
        """Atoms in per-site (amp_a, amp_b, amp_e) states, cavities empty."""
        vecs = []
        for f in self.space.factors:
            if f.label.startswith("p"):
                v = np.zeros(f.cutoff, dtype=complex)
                v[0] = 1.0
                vecs.append(v)
            else:
                i = int(f.label[1:])
                vecs.append(np.asarray(site_amps[i], dtype=complex))
        return product_ket(self.space, vecs)


def spin_array_space(n_sites, photon_cutoff=2) -> SpaceSpec:
    facs = [Factor(f"p{i}", PHOTON_MODE, photon_cutoff) for i in range(n_sites)]
    facs += [Factor(f"a{i}", ATOM_LEVELS, 3) for i in range(n_sites)]
    return space(*facs)


def _collective(sp, n_sites, build):
    op = build(0)
    for i in range(1, n_sites):
        op = op + build(i)
    return op


def _static_terms(sp, geometry, frame_delta1):
    from ..dynamics import Term

    terms = []
    pairs = neighbor_pairs(geometry)
    if pairs and geometry.hop != 0.0:
        hop_op = None
        for i, j in pairs:
            ai_dag_aj = annihilation(sp, f"p{i}").dag() @ annihilation(sp, f"p{j}")
            hop_op = ai_dag_aj if hop_op is None else hop_op + ai_dag_aj
        terms.append(Term(op=hop_op, scale=geometry.hop, add_hc=True))
    if frame_delta1 != 0.0:
        pb = _collective(sp, geometry.n_sites,
                         lambda i: transition(sp, f"a{i}", LEVEL_B, LEVEL_B))
        terms.append(Term(op=pb, scale=frame_delta1))
    return terms


def _cavity_terms(sp, geometry, g_a, g_b, omega_e, e_b):
    """Atom-cavity coupling rows; e_b is the frame energy of |b>."""
    from ..dynamics import Term

    n = geometry.n_sites
    terms = []
    for g, lvl, e_x in ((g_a, LEVEL_A, 0.0), (g_b, LEVEL_B, e_b)):
        if g == 0.0:
            continue
        op = _collective(
            sp, n,
            lambda i: annihilation(sp, f"p{i}") @ transition(sp, f"a{i}", LEVEL_E, lvl),
        )
        terms.append(Term(op=op, scale=g,
                          frequency=omega_e - e_x - geometry.omega_C, add_hc=True))
    return terms


def _laser_term(sp, n, Rabi, lvl, nu):
    from ..dynamics import Term

    op = _collective(sp, n, lambda i: transition(sp, f"a{i}", LEVEL_E, lvl))
    return Term(op=op, scale=0.5 * Rabi, frequency=nu, add_hc=True)


def xy_full_model(drive: XYDrive, photon_cutoff=2, frame_delta1=None) -> SpinArrayModel:
    """Full model of the flip-flop drive.

    frame_delta1 defaults to drive.delta1, which makes both laser rows
    symmetric around the two-photon resonance; pass the shared value when
    interleaving with a zz segment so both sectors live in one frame.
    """
    d = drive
    if frame_delta1 is None:
        frame_delta1 = d.delta1
    sp = spin_array_space(d.geometry.n_sites, photon_cutoff)
    e_b = d.omega_ab - frame_delta1
    n = d.geometry.n_sites
    terms = _static_terms(sp, d.geometry, frame_delta1)
    # laser detunings in this frame
    terms.append(_laser_term(sp, n, d.Omega_a, LEVEL_A, d.omega_e - d.omega_laser_a))
    terms.append(_laser_term(sp, n, d.Omega_b, LEVEL_B,
                             d.omega_e - e_b - d.omega_laser_b))
    terms += _cavity_terms(sp, d.geometry, d.g_a, d.g_b, d.omega_e, e_b)
    return SpinArrayModel(space=sp, terms=tuple(terms), geometry=d.geometry,
                          frame_delta1=frame_delta1)


def zz_full_model(drive: ZZDrive, photon_cutoff=2, frame_delta1=0.0) -> SpinArrayModel:
    d = drive
    sp = spin_array_space(d.geometry.n_sites, photon_cutoff)
    e_b = d.omega_ab - frame_delta1
    n = d.geometry.n_sites
    terms = _static_terms(sp, d.geometry, frame_delta1)
    for Rabi, lvl, e_x in ((d.Omega_a, LEVEL_A, 0.0), (d.Omega_b, LEVEL_B, e_b)):
        if Rabi != 0.0:
            terms.append(_laser_term(sp, n, Rabi, lvl,
                                     d.omega_e - e_x - d.omega_laser))
    for Rabi, lvl, e_x in ((d.Lambda_a, LEVEL_A, 0.0), (d.Lambda_b, LEVEL_B, e_b)):
        if Rabi != 0.0:
            terms.append(_laser_term(sp, n, Rabi, lvl,
                                     d.omega_e - e_x - d.nu_laser))
    terms += _cavity_terms(sp, d.geometry, d.g_a, d.g_b, d.omega_e, e_b)
    return SpinArrayModel(space=sp, terms=tuple(terms), geometry=d.geometry,
                          frame_delta1=frame_delta1)


# ---------------------------------------------------------------------------
# loss budget and design helpers


@dataclass(frozen=True)
class SpinDecayRates:
    """Effective spin decoherence inherited from atomic and cavity loss.

    Gamma_flip: optical pumping through the off-resonant excited state,
    |Omega/(2 Delta)|^2 * Gamma_E per atom.
    Gamma_bond: loss of the virtual bond photon,
    |Omega g/(2 Delta)|^2 * gamma_onsite^2 * Gamma_C.
    exchange: the bond strength |Omega g/(2 Delta)|^2 * gamma_bond the rates
    compete against.
    """

    Gamma_flip: float
    Gamma_bond: float
    exchange: float

    @property
    def ratios(self):
        return {
            "Gamma_flip/exchange": self.Gamma_flip / abs(self.exchange),
            "Gamma_bond/exchange": self.Gamma_bond / abs(self.exchange),
        }


def spin_decay_rates(Omega, g, Delta, Gamma_E, Gamma_C, geometry, omega_laser,
                     warn=True) -> SpinDecayRates:
    raman = abs(Omega * g / (2.0 * Delta)) ** 2
    g1 = gamma_onsite(geometry, omega_laser)
    g2 = gamma_bond(geometry, omega_laser)
    rates = SpinDecayRates(
        Gamma_flip=abs(Omega / (2.0 * Delta)) ** 2 * Gamma_E,
        Gamma_bond=raman * g1**2 * Gamma_C,
        exchange=raman * g2,
    )
    if warn:
        check_ratios(rates.ratios, "spin decay budget")
    return rates


def solve_cavity_frequency_for_jz(drive: ZZDrive, Jz_target, x_max=None):
    """Pick omega_C so the zz bond strength equals Jz_target.

    Solves gamma_bond(x) = Jz / |Omega_b g_b/4Delta_b - Omega_a g_a/4Delta_a|^2
    for x = omega_laser - omega_C on the below-band branch (laser red of every
    normal mode), where the bond weight falls monotonically with distance from
    the band edge.  Returns a copy of drive.geometry with the solved omega_C.
    """
    from scipy.optimize import brentq

    d = drive
    amp = abs(
        d.Omega_b * d.g_b / (4.0 * d.Delta_b) - d.Omega_a * d.g_a / (4.0 * d.Delta_a)
    ) ** 2
    if amp == 0.0:
        raise ValueError("balanced Raman amplitudes: zz bond vanishes identically")
    gam2_req = Jz_target / amp
    if gam2_req <= 0.0:
        raise ValueError("Jz target must be positive on the below-band branch")
    # hopping spectrum relative to omega_C
    geo0 = ArrayGeometry(d.geometry.n_sites, d.geometry.topology,
                         hop=d.geometry.hop, omega_C=0.0)
    band_min = float(np.linalg.eigvalsh(hop_matrix(geo0)).min())
    if x_max is None:
        x_max = band_min - 1e4 * abs(d.geometry.hop)

    def f(x):
        return gamma_bond(geo0, x) - gam2_req

    lo = band_min - 1e-9 * max(abs(band_min), 1.0)
    if f(lo) < 0.0:
        raise ValueError("Jz target exceeds the maximum bond weight at this hop")
    x = brentq(f, x_max, lo, xtol=1e-14, rtol=1e-15)
    return ArrayGeometry(d.geometry.n_sites, d.geometry.topology,
                         hop=d.geometry.hop, omega_C=d.omega_laser - x)
