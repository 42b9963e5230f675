"""Pulse-sequence assembly for the library's standard experiments.

Everything here turns a model bundle plus a handful of times into a
PulseSchedule; the dynamics layer does not know about models and the model
layer does not know about schedules beyond emitting Terms.
"""

import numpy as np

from .dynamics import (
    ENV_EIT_COLL_AMP,
    ENV_EIT_DARK_AMP,
    ENV_EIT_J_FRAC,
    ENV_EIT_U_FRAC,
    Channel,
    Envelope,
    PulseSchedule,
    Segment,
    Term,
    evolve_schrodinger,
    smoothstep,
)
from .models.eit import SiteCutoffs, eit_site_hamiltonian, eit_site_space, polariton_operators
from .models.kerr import (
    KerrMedium,
    cavity_term,
    kerr_initial_ket,
    pulse_duration,
    qubit_pulse_term,
    raman_term,
)
from .qcore import Factor, Ket, Operator, PHOTON_MODE, annihilation, basis_ket, number, space


# ---------------------------------------------------------------------------
# Kerr-cell echo protocol


def kerr_plain_schedule(medium: KerrMedium, duration, channels=()) -> PulseSchedule:
    """Cavity + Raman drive on continuously; no qubit pulses."""
    seg = Segment(duration, (cavity_term(medium), raman_term(medium)),
                  channels=tuple(channels), label="main")
    return PulseSchedule((seg,))


def kerr_echo_schedule(medium: KerrMedium, t_main, channels=()) -> PulseSchedule:
    """Pulse sequence rotating the number-linear Stark term out of the way.

    Each outer block [pi/2 pulse, cavity-only window of 1/Theta, inverse
    pulse] realizes a photon-number-conditioned rotation in the qubit +-
    plane; the two blocks conjugate the main window with that rotation and
    its inverse, which cancels the number-linear term in the +- basis and
    leaves the n^2 phase.  The rotation direction is set by the pulse
    phase: the opening pulse of the first block is exp(+i pi/4 sigma_x)
    (drive sign -1), its closing pulse the inverse, and the second block
    runs the mirror order.  The cavity coupling stays on throughout; the
    Raman pair only during the main window.
    """
    p = medium.params
    tp = pulse_duration(p)
    t_free = 1.0 / p.Theta
    cav = cavity_term(medium)
    ram = raman_term(medium)
    ch = tuple(channels)

    def pulse(sign, lbl):
        return Segment(tp, (qubit_pulse_term(medium, sign), cav), channels=ch,
                       label=lbl)

    segs = (
        pulse(-1, "pulse1"),
        Segment(t_free, (cav,), channels=ch, label="window1"),
        pulse(+1, "pulse2"),
        Segment(t_main, (cav, ram), channels=ch, label="main"),
        pulse(+1, "pulse3"),
        Segment(t_free, (cav,), channels=ch, label="window2"),
        pulse(-1, "pulse4"),
    )
    return PulseSchedule(segs)


def kerr_compensation(medium: KerrMedium, t, sign=+1) -> Operator:
    """Photon-number phase removing the residual linear cavity shift.

    exp(i sign N g^2/(2 Delta1) n (t + 2/Theta)): the deterministic part of
    the phase each Fock level accumulates over the main window plus the two
    free windows.
    """
    p = medium.params
    phase = sign * p.N * p.g**2 / (2.0 * p.Delta1) * (t + 2.0 / p.Theta)
    n_diag = medium.n_ph.dense().diagonal().real
    return Operator(medium.space, np.diag(np.exp(1j * phase * n_diag)))


def kerr_echo_overlap(medium: KerrMedium, n_init, t_main, channels=(),
                      nojump=False, **evolve_kw):
    """<psi0| V(t_main) |psi0> from integrating the three-level sequence.

    The honest full-model counterpart of the dispersive protocol run: keeps
    the excited level, the detuned drive phases, and (optionally) collapse
    channels in conditional no-jump form.
    """
    sched = kerr_echo_schedule(medium, t_main, channels=channels)
    psi0 = kerr_initial_ket(medium, n_init)
    out = evolve_schrodinger(sched, psi0,
                             times=np.array([0.0, sched.total_duration]),
                             store_states=True, nojump=nojump, **evolve_kw)
    return complex(np.vdot(psi0.amps, out.states[-1].amps))


# ---------------------------------------------------------------------------
# STIRAP-style control switch-off


def stirap_ramp_schedule(p, ramp_duration, Omega_end=0.0,
                         cutoffs=SiteCutoffs(), finite_n=False):
    """Single site with the control field ramped (1+cos)/2 down to Omega_end.

    Returns (schedule, psi0, n2) where psi0 is the one-excitation dark state
    at the initial control amplitude and n2 counts the level-2 excitation the
    polariton should end up in.
    """
    sp = eit_site_space(cutoffs)
    h0 = eit_site_hamiltonian(p, cutoffs, finite_n=finite_n, Omega=0.0)
    coupling = eit_site_hamiltonian(p, cutoffs, finite_n=finite_n, Omega=1.0) - h0
    env = smoothstep(p.Omega, Omega_end, ramp_duration)
    seg = Segment(ramp_duration, (Term(op=h0), Term(op=coupling, envelope=env)),
                  label="ramp")
    dark, _ = polariton_operators(p, cutoffs, finite_n=finite_n)["dark"]
    vac = basis_ket(sp, [0] * len(sp.factors))
    psi0 = Ket(sp, (dark.dag() @ vac).amps, normalize=True)
    return PulseSchedule((seg,)), psi0, number(sp, "b2")


def stirap_quality(p, ramp_duration, Omega_end=0.0, samples=2001):
    """Peak diabatic parameter g |dOmega/dt| / (B^2 min|mu_pm|) over the ramp.

    Small Q means the dark state follows the control adiabatically; the
    bright-polariton gap min|mu_pm| closes as B -> g, which is what limits
    the ramp speed.
    """
    tau = np.linspace(0.0, ramp_duration, samples)
    x = np.pi * tau / ramp_duration
    Om = Omega_end + (p.Omega - Omega_end) * 0.5 * (1.0 + np.cos(x))
    dOm = -(p.Omega - Omega_end) * 0.5 * np.pi / ramp_duration * np.sin(x)
    B2 = p.g**2 + Om**2
    A = np.sqrt(4.0 * B2 + p.delta**2)
    gap = np.minimum(np.abs((p.delta - A) / 2.0), np.abs((p.delta + A) / 2.0))
    return float(np.max(p.g * np.abs(dOm) / (B2 * gap)))


# ---------------------------------------------------------------------------
# alternating (Trotterized) drives


def alternating_schedule(terms_a, terms_b, window_a, window_b, total,
                         channels_a=(), channels_b=(), labels=("a", "b")):
    """Alternate two term sets in windows of fixed length until `total`.

    All phases stay functions of global time, so no frame realignment happens
    at window boundaries; the last window is truncated to land on `total`.
    """
    if window_a <= 0.0 or window_b <= 0.0:
        raise ValueError("window lengths must be positive")
    segs = []
    t = 0.0
    eps = 1e-12 * max(total, 1.0)
    which = 0
    while t < total - eps:
        if which == 0:
            dt = min(window_a, total - t)
            segs.append(Segment(dt, terms_a, channels=tuple(channels_a),
                                label=labels[0]))
        else:
            dt = min(window_b, total - t)
            segs.append(Segment(dt, terms_b, channels=tuple(channels_b),
                                label=labels[1]))
        t += dt
        which ^= 1
    return PulseSchedule(segs)


# ---------------------------------------------------------------------------
# control-field ramps across an EIT array


def eit_ramp_schedule(model, Omega_start, Omega_end, duration,
                      channels=()) -> PulseSchedule:
    """Array evolution while Omega(t) ramps between two plateaus."""
    env = smoothstep(Omega_start, Omega_end, duration)
    terms = (
        Term(op=model.static),
        Term(op=model.omega_coupling, envelope=env, add_hc=True),
    )
    seg = Segment(duration, terms, channels=tuple(channels), label="ramp")
    return PulseSchedule((seg,))


def dark_level4_ramp_schedule(model, Omega_start, Omega_end, duration,
                              loss=None) -> PulseSchedule:
    """Control ramp on the dark + level-4 array.

    The hop follows the photon fraction Omega^2/B^2, the pair coupling to
    level 4 follows g Omega/B^2, and cavity decay acts on each dark mode
    weighted by its instantaneous photon content Omega/B.  Level-4 loss is
    a plain decay at gamma4.
    """
    p = model.params
    g2 = p.g**2
    n4_tot = None
    nd_tot = None
    for i in range(model.geometry.n_sites):
        n4 = model.b4[i].dag() @ model.b4[i]
        n4_tot = n4 if n4_tot is None else n4_tot + n4
        nd_tot = (model.number_d[i] if nd_tot is None
                  else nd_tot + model.number_d[i])
    terms = [Term(op=n4_tot, scale=p.Delta + p.epsilon)]
    if model.hop_op is not None and model.geometry.hop != 0.0:
        terms.append(Term(op=model.hop_op, scale=model.geometry.hop,
                          envelope=Envelope(ENV_EIT_J_FRAC, Omega_start,
                                            Omega_end, duration, g2)))
    terms.append(Term(op=model.coupling_op, scale=p.g24,
                      envelope=Envelope(ENV_EIT_COLL_AMP, Omega_start,
                                        Omega_end, duration, g2),
                      add_hc=True))
    if p.epsilon != 0.0:
        # mu = eps g^2/B^2 = eps (1 - Omega^2/B^2)
        terms.append(Term(op=nd_tot, scale=p.epsilon))
        terms.append(Term(op=nd_tot, scale=-p.epsilon,
                          envelope=Envelope(ENV_EIT_J_FRAC, Omega_start,
                                            Omega_end, duration, g2)))
    channels = []
    if loss is not None:
        if loss.kappa:
            env = Envelope(ENV_EIT_DARK_AMP, Omega_start, Omega_end,
                           duration, g2)
            channels.extend(Channel(op=d, amp_scale=np.sqrt(loss.kappa),
                                    envelope=env) for d in model.d)
        if loss.gamma4:
            channels.extend(Channel(op=b4, amp_scale=np.sqrt(loss.gamma4))
                            for b4 in model.b4)
    seg = Segment(duration, tuple(terms), channels=tuple(channels),
                  label="ramp")
    return PulseSchedule((seg,))


def dark_unit_filling_ket(model, fill=1) -> Ket:
    """`fill` quanta in every dark mode of a dark + level-4 array."""
    spc = model.space
    occ = [0] * len(spc.mode_labels)
    for i in range(model.geometry.n_sites):
        occ[spc.mode_position(f"s{i}.d")] = fill
    amps = np.zeros(spc.dim, dtype=np.complex128)
    amps[spc.index[tuple(occ)]] = 1.0
    return Ket(spc, amps)


def bh_ramp_channels(p, sp, loss, Omega_start, Omega_end, duration):
    """Lattice-model loss channels tracking the control ramp.

    Cavity decay enters through the photon fraction Omega/B of the dark
    mode; level-4 spontaneous emission removes on-site pairs with the
    admixture amplitude g24 g Omega/(Delta B^2).
    """
    g2 = p.g**2
    labels = [f.label for f in sp.factors]
    channels = []
    if loss.kappa:
        env = Envelope(ENV_EIT_DARK_AMP, Omega_start, Omega_end, duration, g2)
        channels.extend(
            Channel(op=annihilation(sp, lab), amp_scale=np.sqrt(loss.kappa),
                    envelope=env)
            for lab in labels)
    if loss.gamma4 and p.g24 and p.Delta:
        env = Envelope(ENV_EIT_COLL_AMP, Omega_start, Omega_end, duration, g2)
        amp = np.sqrt(loss.gamma4) * p.g24 / abs(p.Delta)
        for lab in labels:
            b = annihilation(sp, lab)
            channels.append(Channel(op=b @ b, amp_scale=amp, envelope=env))
    return channels


def bh_ramp_terms(p, geometry, Omega_start, Omega_end, duration, cutoff=4):
    """Bose-Hubbard terms whose U, J, mu track the control ramp.

    Returns (space, terms): per-site polariton modes b0..b{n-1}; the hop
    scales with the photon fraction Omega^2/B^2, the interaction with
    g^2 Omega^2/B^4, and the chemical potential with the matter fraction.
    """
    n = geometry.n_sites
    sp = space(*(Factor(f"b{i}", PHOTON_MODE, cutoff) for i in range(n)))
    g2 = p.g**2
    terms = []

    hop_op = None
    from .models.lattice import neighbor_pairs

    for i, j in neighbor_pairs(geometry):
        bb = annihilation(sp, f"b{i}").dag() @ annihilation(sp, f"b{j}")
        hop_op = bb if hop_op is None else hop_op + bb
    if hop_op is not None and geometry.hop != 0.0:
        terms.append(Term(op=hop_op, scale=-geometry.hop,
                          envelope=Envelope(ENV_EIT_J_FRAC, Omega_start,
                                            Omega_end, duration, g2),
                          add_hc=True))

    n_ops = [number(sp, f"b{i}") for i in range(n)]
    int_op = None
    for nn in n_ops:
        site = nn @ nn - nn
        int_op = site if int_op is None else int_op + site
    if p.Delta != 0.0 and p.g24 != 0.0:
        terms.append(Term(op=int_op, scale=-(p.g24**2 / p.Delta),
                          envelope=Envelope(ENV_EIT_U_FRAC, Omega_start,
                                            Omega_end, duration, g2)))
    if p.epsilon != 0.0:
        tot_n = n_ops[0]
        for nn in n_ops[1:]:
            tot_n = tot_n + nn
        # mu = eps g^2/B^2 = eps (1 - Omega^2/B^2), split into two envelopes
        terms.append(Term(op=tot_n, scale=p.epsilon))
        terms.append(Term(op=tot_n, scale=-p.epsilon,
                          envelope=Envelope(ENV_EIT_J_FRAC, Omega_start,
                                            Omega_end, duration, g2)))
    return sp, tuple(terms)


def unit_filling_ket(sp) -> Ket:
    return basis_ket(sp, [1] * len(sp.factors))


def dark_filling_ket(model, Omega=None, fill=1) -> Ket:
    """`fill` dark polaritons per site created on the array vacuum.

    The dark mode at the instantaneous control amplitude is
    p0 = (g b2 - Omega a)/B, so the state interpolates between a photonic
    and a purely atomic filling as Omega moves across g.
    """
    if Omega is None:
        Omega = model.params.Omega
    g = model.params.g
    B = np.sqrt(g**2 + Omega**2)
    spc = model.space
    if hasattr(spc, "vacuum"):
        psi = spc.vacuum()
    else:
        psi = basis_ket(spc, [0] * len(spc.factors)).amps.copy()
    for i in range(model.geometry.n_sites):
        create = ((g / B) * model.b2[i].dag() - (Omega / B) * model.a[i].dag()).csr()
        for _ in range(fill):
            psi = create @ psi
    return Ket(spc, psi, normalize=True)
