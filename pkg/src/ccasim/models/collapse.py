"""Collapse-channel builders for the open-system models.

Channels follow the amplitude convention of dynamics.Channel: a rate kappa
enters as amp_scale = sqrt(kappa) on a bare operator, so C†C carries the rate
and the no-jump drift is -(i/2) sum C†C.
"""

import numpy as np

from ..dynamics import Channel, Envelope
from ..dynamics.schedule import ENV_EIT_DARK_AMP
from ..qcore import annihilation
from .params import LossRates


def damped_cavity_channel(space, label="ph", kappa=0.0) -> Channel:
    return Channel(op=annihilation(space, label), amp_scale=np.sqrt(kappa))


def eit_collapse_channels(model, loss: LossRates):
    """Per-site photon loss and atomic decay for an EIT array.

    Level 2 is metastable, so the only atomic channels are the decay of the
    intermediate level (gamma3) and of the two-photon level (gamma4).
    """
    chans = []
    for i in range(len(model.a)):
        if loss.kappa:
            chans.append(Channel(op=model.a[i], amp_scale=np.sqrt(loss.kappa)))
        if loss.gamma3:
            chans.append(Channel(op=model.b3[i], amp_scale=np.sqrt(loss.gamma3)))
        if loss.gamma4:
            chans.append(Channel(op=model.b4[i], amp_scale=np.sqrt(loss.gamma4)))
    return tuple(chans)


def dark_polariton_channels(space, site_labels, loss: LossRates, p,
                            Omega_start, Omega_end, ramp_duration):
    """Effective loss of the dark polariton while Omega(t) ramps.

    The polariton's photon weight is Omega/B, so cavity decay leaks through
    at rate kappa * Omega^2/B^2; the channel amplitude follows the ramp.
    Two-body loss through the doubly-excited level is gated off at unit
    filling and is not representable as a linear channel, so it is reported
    through the static rate formula instead (see dark_state_bh_params).
    """
    env = Envelope(ENV_EIT_DARK_AMP, Omega_start, Omega_end, ramp_duration,
                   p.g**2)
    return tuple(
        Channel(op=annihilation(space, lbl), amp_scale=np.sqrt(loss.kappa),
                envelope=env)
        for lbl in site_labels
    )


def kerr_noise_channels(medium, kappa=0.0, gamma=0.0, theta=0.0):
    """Loss set for one Kerr cell: photon decay, excited-state decay split
    evenly onto the two stable levels, and dephasing of every atomic level.

    The dephasing projectors act on the symmetrized collective states, which
    coincides with per-atom dephasing for a single atom (the regime where
    this noise model is used).
    """
    chans = []
    if kappa:
        chans.append(Channel(op=medium.a, amp_scale=np.sqrt(kappa)))
    if gamma:
        half = np.sqrt(0.5 * gamma)
        chans.append(Channel(op=medium.S(0, 2), amp_scale=half))
        chans.append(Channel(op=medium.S(1, 2), amp_scale=half))
    if theta:
        root = np.sqrt(theta)
        for lvl in (0, 1, 2):
            chans.append(Channel(op=medium.S(lvl, lvl), amp_scale=root))
    return tuple(chans)


def spin_loss_channels(model, Gamma_E=0.0, kappa=0.0):
    """Excited-state emission (branching 1/2 to each stable level) and photon
    loss for the driven spin array."""
    from .spins import LEVEL_A, LEVEL_B, LEVEL_E

    from ..qcore import transition

    chans = []
    for i in range(model.n_sites):
        if Gamma_E:
            half = np.sqrt(0.5 * Gamma_E)
            chans.append(Channel(op=transition(model.space, f"a{i}", LEVEL_A, LEVEL_E),
                                 amp_scale=half))
            chans.append(Channel(op=transition(model.space, f"a{i}", LEVEL_B, LEVEL_E),
                                 amp_scale=half))
        if kappa:
            chans.append(Channel(op=annihilation(model.space, f"p{i}"),
                                 amp_scale=np.sqrt(kappa)))
    return tuple(chans)
