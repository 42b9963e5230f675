"""Alternating-sector (Trotter) schedules.

Two term sets (e.g. the xy-drive and zz-drive interaction pictures) are
interleaved as segments of duration dt1 and dt2.  Phases stay functions of
global time, and the state is carried continuously across boundaries: this
is the phase-tracked digital protocol in which each sector contributes its
own effective Hamiltonian, so the combined model is H_1 + H_2 acting for
t_eff = t_total * dt_i/(dt1+dt2) per sector (t_total/2 for equal intervals).
dt2 = 0 degenerates to a plain single-sector schedule.
"""

from .schedule import PulseSchedule, Segment


def trotter_schedule(terms_a, terms_b, dt1, dt2, n_cycles, channels_a=(),
                     channels_b=(), label_a="sector-a", label_b="sector-b"):
    if dt1 <= 0:
        raise ValueError("dt1 must be positive")
    if dt2 < 0:
        raise ValueError("dt2 must be nonnegative")
    if n_cycles < 1:
        raise ValueError("need at least one cycle")
    segs = []
    for _ in range(n_cycles):
        segs.append(Segment(duration=dt1, terms=tuple(terms_a),
                            channels=tuple(channels_a), label=label_a))
        if dt2 > 0:
            segs.append(Segment(duration=dt2, terms=tuple(terms_b),
                                channels=tuple(channels_b), label=label_b))
    return PulseSchedule(segments=tuple(segs))


def effective_time_fractions(dt1, dt2):
    """(f1, f2): fraction of total time each sector acts; t_eff = f * t."""
    tot = dt1 + dt2
    return dt1 / tot, dt2 / tot
