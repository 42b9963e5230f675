"""Experiment runners: build the models, evolve, write CSV/JSON results.

Each runner returns an ExperimentOutput (time grid, named columns, summary
record); run_experiment dispatches on the experiment name, times the run and
writes the files.  Column values are written with 12 significant digits so
identical configs produce byte-identical CSV bodies.
"""

import csv
import json
import os
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .. import __version__
from ..dynamics import (PulseSchedule, Segment, Term, evolve_schrodinger,
                        run_ensemble, trotter_schedule)
from ..models import spins
from ..models.bose_hubbard import (bh_regime_ratios, dark_state_bh_params,
                                   photonic_kerr_figures,
                                   two_component_bh_params)
from ..models.eit import dark_level4_array_model
from ..models.kerr import (DispersiveKerrProtocol, KerrNoise, first_zero_time,
                           ideal_kerr_signal, kerr_condition_ratios,
                           kerr_signal_Y)
from ..models.params import (ArrayGeometry, EITAtomParams, KerrParams,
                             LossRates)
from ..observables import (chain_diagnostics, normalized_op_observable,
                           number_stats_observables, series_deviation)
from ..qcore import number
from ..sequences import (bh_ramp_channels, bh_ramp_terms,
                         dark_level4_ramp_schedule, dark_unit_filling_ket,
                         stirap_quality, stirap_ramp_schedule,
                         unit_filling_ket)
from .config import ConfigError, Issue, validate_config


@dataclass
class ExperimentOutput:
    times: object                  # seconds grid, or None for pure-JSON runs
    columns: dict                  # name -> array, CSV order
    column_doc: dict               # name -> one-line meaning
    summary: dict = field(default_factory=dict)


def _need(params, keys, where="params"):
    missing = [k for k in keys if k not in params]
    if missing:
        raise ConfigError([Issue("error", f"{where}.{k}", "missing required field")
                           for k in missing])


def _ratio_values(ratios):
    """check_ratios emits {name: (value, ok)}; flatten to {name: value}."""
    return {k: float(v[0] if isinstance(v, tuple) else v)
            for k, v in ratios.items()}


def _grid(cfg, total):
    return np.linspace(0.0, float(total), int(cfg.num("output_grid_points", 400)))


def _tols(cfg, rtol=1e-9, atol=1e-11):
    return dict(rtol=float(cfg.num("rtol", rtol)),
                atol=float(cfg.num("atol", atol)),
                integrator=cfg.num("integrator", "auto"))


def _evolve_or_ensemble(cfg, sched, psi0, times, obs):
    """Deterministic conditional run, or a jump-unraveled ensemble mean."""
    n_traj = int(cfg.num("n_trajectories", 0))
    if n_traj > 0:
        _, (mean, se, n) = run_ensemble(sched, psi0, int(cfg.num("seed")),
                                        n_traj, times=times, observables=obs,
                                        rtol=float(cfg.num("rtol", 1e-10)),
                                        atol=float(cfg.num("atol", 1e-12)))
        return mean, {"mode": "jump-ensemble", "n_trajectories": n}
    res = evolve_schrodinger(sched, psi0, times=times, observables=obs,
                             nojump=True, **_tols(cfg))
    return res.observables, {"mode": "conditional-no-jump",
                             "min_norm": float(np.min(res.norms))}


# ---- mott-superfluid ----------------------------------------------------

def _run_mott_superfluid(cfg):
    P = cfg.params
    _need(P, ("g13", "g24", "N", "Delta", "Omega_start", "Omega_end",
              "hop", "n_sites", "duration_s"))
    p = EITAtomParams(g13=P["g13"], g24=P["g24"], Omega=P["Omega_start"],
                      Delta=P["Delta"], delta=P.get("delta", 0.0),
                      epsilon=P.get("epsilon", 0.0), N=int(P["N"]))
    geo = ArrayGeometry(int(P["n_sites"]), P.get("topology", "chain-open"),
                        hop=P["hop"])
    loss = LossRates(kappa=P.get("kappa", 0.0), gamma3=P.get("gamma3", 0.0),
                     gamma4=P.get("gamma4", 0.0))
    Om0, Om1, T = P["Omega_start"], P["Omega_end"], P["duration_s"]
    cap = int(cfg.num("excitation_cap", 3))
    model = dark_level4_array_model(p, geo, cap)

    sched = dark_level4_ramp_schedule(model, Om0, Om1, T, loss=loss)
    psi0 = dark_unit_filling_ket(model)

    def Om_of(t):
        x = min(max(t / T, 0.0), 1.0)
        return Om0 + (Om1 - Om0) * 0.5 * (1.0 - np.cos(np.pi * x))

    obs = number_stats_observables(
        model.number_d, names=[f"full{i}" for i in range(geo.n_sites)],
        normalized=True, stat="var")
    # cutoff-adequacy monitor: occupation of the two-excitation atom mode
    b4_tot = model.b4[0].dag() @ model.b4[0]
    for i in range(1, geo.n_sites):
        b4_tot = b4_tot + model.b4[i].dag() @ model.b4[i]
    obs["n_b4_total"] = normalized_op_observable(b4_tot)

    times = _grid(cfg, T)
    full_obs, full_info = _evolve_or_ensemble(cfg, sched, psi0, times, obs)

    bh_cut = int(cfg.num("bh_cutoff", 4))
    bh_sp, bh_terms = bh_ramp_terms(p, geo, Om0, Om1, T, cutoff=bh_cut)
    chans_eff = bh_ramp_channels(p, bh_sp, loss, Om0, Om1, T)
    sched_eff = PulseSchedule((Segment(T, bh_terms, channels=tuple(chans_eff),
                                       label="ramp"),))
    psi0_eff = unit_filling_ket(bh_sp)
    obs_eff = number_stats_observables(
        [number(bh_sp, f"b{i}") for i in range(geo.n_sites)],
        names=[f"eff{i}" for i in range(geo.n_sites)], normalized=True,
        stat="var")
    eff_obs, eff_info = _evolve_or_ensemble(cfg, sched_eff, psi0_eff, times,
                                            obs_eff)

    columns, doc = {}, {}
    columns["Omega"] = np.array([Om_of(t) for t in times])
    doc["Omega"] = "control amplitude along the ramp (s^-1)"
    devs = {}
    for i in range(geo.n_sites):
        columns[f"n{i}_full"] = np.asarray(full_obs[f"full{i}_n"], float)
        columns[f"F{i}_full"] = np.asarray(full_obs[f"full{i}_dn"], float)
        columns[f"n{i}_eff"] = np.asarray(eff_obs[f"eff{i}_n"], float)
        columns[f"F{i}_eff"] = np.asarray(eff_obs[f"eff{i}_dn"], float)
        doc[f"n{i}_full"] = f"site-{i} dark-polariton occupation, array model"
        doc[f"F{i}_full"] = f"site-{i} number variance, array model"
        doc[f"n{i}_eff"] = f"site-{i} occupation, effective lattice model"
        doc[f"F{i}_eff"] = f"site-{i} number variance, effective lattice model"
        d = series_deviation(times, columns[f"F{i}_eff"], columns[f"F{i}_full"])
        devs[f"F{i}"] = {"max_abs": d.max_abs, "max_rel": d.max_rel,
                         "t_at_max_s": d.t_at_max}

    bh0 = dark_state_bh_params(p, geo, loss)
    bh1 = dark_state_bh_params(replace(p, Omega=Om1), geo, loss)
    summary = {
        "effective_params": {
            "U_start": bh0.U, "J_start": bh0.J, "U_over_J_start": bh0.U / bh0.J,
            "U_end": bh1.U, "J_end": bh1.J, "U_over_J_end": bh1.U / bh1.J,
            "Gamma0_start": bh0.Gamma0,
        },
        "regime_ratios": _ratio_values(bh_regime_ratios(p, geo)),
        "max_deviations": devs,
        "leakage": {
            "n_b4_total_max": float(np.max(full_obs["n_b4_total"])),
        },
        "full_model": dict(full_info, dim=model.space.dim,
                           excitation_cap=cap),
        "effective_model": dict(eff_info, dim=bh_sp.dim, cutoff=bh_cut),
    }
    return ExperimentOutput(times, columns, doc, summary)


# ---- two-component-sweep ------------------------------------------------

def _run_two_component_sweep(cfg):
    P = cfg.params
    _need(P, ("g13", "g24", "N", "Delta", "delta", "Omega_start", "Omega_end",
              "hop", "omega_C"))
    geo = ArrayGeometry(int(P.get("n_sites", 2)),
                        P.get("topology", "chain-open"),
                        hop=P["hop"], omega_C=P["omega_C"])
    pts = int(cfg.num("sweep_points", 100))
    omegas = np.linspace(P["Omega_start"], P["Omega_end"], pts)
    base = EITAtomParams(g13=P["g13"], g24=P["g24"], Omega=omegas[0],
                         Delta=P["Delta"], delta=P["delta"],
                         epsilon=P.get("epsilon", 0.0), N=int(P["N"]))

    fields = ("mu_b", "mu_c", "J_bb", "J_cc", "J_bc", "U_b", "U_c", "U_bc")
    series = {f: np.empty(pts) for f in fields}
    conv = np.empty(pts)
    for k, om in enumerate(omegas):
        tc = two_component_bh_params(replace(base, Omega=om), geo)
        for f in fields:
            series[f][k] = getattr(tc, f)
        conv[k] = 1.0 if tc.conversion_active else 0.0

    # the sweep has no dynamics; time_s parameterizes it over one second
    times = np.linspace(0.0, 1.0, pts)
    columns = {"Omega": omegas, **series, "conversion_active": conv}
    doc = {"Omega": "control amplitude at this sweep point (s^-1)",
           "mu_b": "dark-species chemical potential", "mu_c": "bright-species chemical potential",
           "J_bb": "dark-dark hop (units of 2 omega_C)", "J_cc": "bright-bright hop",
           "J_bc": "interspecies hop", "U_b": "dark on-site interaction",
           "U_c": "bright on-site interaction", "U_bc": "cross-species interaction",
           "conversion_active": "1 where |mu_c-mu_b| < |J_bc| (species mix)"}
    active = omegas[conv > 0.5]
    g = base.g
    summary = {
        "time_axis": "sweep fraction; Omega ramps linearly over one second",
        "effective_params": {f: {"start": float(series[f][0]),
                                 "end": float(series[f][-1])} for f in fields},
        "conversion_window": (
            {"Omega_low": float(active[0]), "Omega_high": float(active[-1]),
             "Omega_low_over_g": float(active[0] / g),
             "Omega_high_over_g": float(active[-1] / g)}
            if active.size else None),
        "collective_g": g,
    }
    return ExperimentOutput(times, columns, doc, summary)


# ---- kerr protocols -----------------------------------------------------

def _kerr_params(P):
    return KerrParams(g=P["g"], Lambda=P["Lambda"], Delta1=P["Delta1"],
                      Delta2=P["Delta2"], N=int(P["N"]),
                      Omega_pulse=P.get("Omega_pulse", 0.0))


def _measured_first_zero(times, y):
    """First sign change of y, linearly interpolated; None if no crossing."""
    s = np.sign(y)
    idx = np.where(s[:-1] * s[1:] < 0)[0]
    if idx.size == 0:
        return None
    i = int(idx[0])
    t0, t1, y0, y1 = times[i], times[i + 1], y[i], y[i + 1]
    return float(t0 - y0 * (t1 - t0) / (y1 - y0))


def _run_kerr_validate(cfg):
    P = cfg.params
    _need(P, ("g", "Lambda", "Delta1", "Delta2", "N", "n_init", "t_max_s"))
    kp = _kerr_params(P)
    n = int(P["n_init"])
    times = _grid(cfg, P["t_max_s"])
    proto = DispersiveKerrProtocol(kp, n)
    ov = np.array([proto.overlap(t) for t in times])
    X = np.abs(ov)
    Y = kerr_signal_Y(kp, n, times, ov)
    Y_ideal = ideal_kerr_signal(kp, n, times)

    t_zero = _measured_first_zero(times, Y)
    t_zero_ideal = float(first_zero_time(kp, n))
    columns = {"X": X, "Y": Y, "Y_ideal": Y_ideal}
    doc = {"X": "overlap magnitude after the echoed protocol (1 = no leakage)",
           "Y": "phase-referenced overlap tracking the Kerr phase",
           "Y_ideal": "cos(kappa_eff n^2 t), the pure-Kerr prediction"}
    summary = {
        "effective_params": {"Theta": kp.Theta, "kappa_eff": kp.kappa_eff,
                             "n_init": n, "N": kp.N},
        "regime_ratios": _ratio_values(kerr_condition_ratios(kp)),
        "first_zero_s": {"measured": t_zero, "ideal": t_zero_ideal,
                         "ratio": (t_zero / t_zero_ideal
                                   if t_zero is not None else None)},
        "max_deviations": {"Y_vs_ideal": float(np.max(np.abs(Y - Y_ideal))),
                           "one_minus_min_X": float(1.0 - np.min(X))},
    }
    return ExperimentOutput(times, columns, doc, summary)


def _run_kerr_noise(cfg):
    P = cfg.params
    _need(P, ("g", "Lambda", "Delta1", "Delta2", "N", "n_init", "t_max_s",
              "kappa", "gamma", "dephasing"))
    kp = _kerr_params(P)
    n = int(P["n_init"])
    noise = KerrNoise(kappa=P["kappa"], gamma=P["gamma"],
                      dephasing=P["dephasing"])
    times = _grid(cfg, P["t_max_s"])
    proto = DispersiveKerrProtocol(kp, n, noise=noise)
    ov = np.array([proto.overlap(t) for t in times])
    X = np.abs(ov)
    Y = kerr_signal_Y(kp, n, times, ov)
    Y_ideal = ideal_kerr_signal(kp, n, times)

    # interior maxima of |Y|: the decaying peak envelope
    absY = np.abs(Y)
    peak_idx = [k for k in range(1, len(times) - 1)
                if absY[k] >= absY[k - 1] and absY[k] > absY[k + 1]]
    peaks = [{"t_s": float(times[k]), "abs_Y": float(absY[k])}
             for k in peak_idx]
    decreasing = all(peaks[k]["abs_Y"] > peaks[k + 1]["abs_Y"]
                     for k in range(len(peaks) - 1))
    # oscillation frequency from the mean zero-crossing spacing
    s = np.sign(Y)
    zeros = np.where(s[:-1] * s[1:] < 0)[0]
    freq = (np.pi / float(np.mean(np.diff(times[zeros])))
            if zeros.size > 1 else None)
    ideal_rate = kp.kappa_eff * n**2

    columns = {"X": X, "Y": Y, "Y_ideal": Y_ideal}
    doc = {"X": "overlap magnitude including loss",
           "Y": "phase-referenced overlap including loss",
           "Y_ideal": "lossless cos(kappa_eff n^2 t) reference"}
    summary = {
        "effective_params": {"Theta": kp.Theta, "kappa_eff": kp.kappa_eff,
                             "n_init": n, "N": kp.N,
                             "ideal_rate": ideal_rate},
        "noise": {"kappa": noise.kappa, "gamma": noise.gamma,
                  "dephasing": noise.dephasing},
        "regime_ratios": _ratio_values(kerr_condition_ratios(kp)),
        "oscillation": {"measured_rate": freq,
                        "rate_ratio": (freq / ideal_rate if freq else None),
                        "peaks": peaks,
                        "envelope_strictly_decreasing": bool(decreasing)},
        "max_deviations": {"Y_vs_ideal": float(np.max(np.abs(Y - Y_ideal)))},
    }
    return ExperimentOutput(times, columns, doc, summary)


# ---- spin-xy (alternating flip-flop / Ising drive) ----------------------

def _run_spin_xy(cfg):
    P = cfg.params
    _need(P, ("omega_e", "omega_ab", "Delta_a", "Omega_a", "Omega_b",
              "g_a", "g_b", "delta1", "hop", "omega_C", "n_sites",
              "zz_Delta_a", "zz_Delta_tilde_a", "zz_Lambda_a", "zz_Lambda_b",
              "window1_s", "window2_s", "n_cycles"))
    n = int(P["n_sites"])
    geo = ArrayGeometry(n, P.get("topology", "chain-open"),
                        hop=P["hop"], omega_C=P["omega_C"])
    xy = spins.XYDrive(omega_e=P["omega_e"], omega_ab=P["omega_ab"],
                       Delta_a=P["Delta_a"], Omega_a=P["Omega_a"],
                       Omega_b=P["Omega_b"], g_a=P["g_a"], g_b=P["g_b"],
                       delta1=P["delta1"], geometry=geo)
    zz = spins.ZZDrive(omega_e=P["omega_e"], omega_ab=P["omega_ab"],
                       Delta_a=P["zz_Delta_a"],
                       Delta_tilde_a=P["zz_Delta_tilde_a"],
                       Omega_a=P["Omega_a"], Omega_b=P["Omega_b"],
                       Lambda_a=P["zz_Lambda_a"], Lambda_b=P["zz_Lambda_b"],
                       g_a=P["g_a"], g_b=P["g_b"], geometry=geo)
    delta1 = P["delta1"]
    cut = int(cfg.num("photon_cutoff", 2))
    full_xy = spins.xy_full_model(xy, photon_cutoff=cut, frame_delta1=delta1)
    full_zz = spins.zz_full_model(zz, photon_cutoff=cut, frame_delta1=delta1)

    dt1, dt2, ncyc = P["window1_s"], P["window2_s"], int(P["n_cycles"])
    sched = trotter_schedule(full_xy.terms, full_zz.terms, dt1, dt2, ncyc,
                             label_a="xy", label_b="zz")
    site_amps = [(1 / np.sqrt(2), 1 / np.sqrt(2), 0.0)] + [(1, 0, 0)] * (n - 1)
    psi0 = full_xy.atom_product_ket(site_amps)
    obs = {
        "p_a1": normalized_op_observable(full_xy.population(0, "a")),
        "p_b1": normalized_op_observable(full_xy.population(0, "b")),
        "excited": normalized_op_observable(full_xy.excited_population()),
        "photons": normalized_op_observable(full_xy.photon_number()),
    }
    times = _grid(cfg, ncyc * (dt1 + dt2))
    res = evolve_schrodinger(sched, psi0, times=times, observables=obs,
                             **_tols(cfg))

    xp = spins.xy_effective_params(xy)
    zp = spins.zz_effective_params(zz)
    sp_chain = spins.spin_chain_space(n)
    # in the shared frame the Ising windows see the bare two-photon offset
    # on top of the drive-induced field: delta1 P_b = delta1 (1+sz)/2
    H1 = spins.spin_chain_hamiltonian(xp, geo, field=xp.B)
    H2 = spins.spin_chain_hamiltonian(zp, geo,
                                      field=zp.B_tilde + 0.5 * delta1)
    sched_eff = trotter_schedule((Term(op=H1),), (Term(op=H2),), dt1, dt2,
                                 ncyc, label_a="xy", label_b="zz")
    psi0_eff = spins.spin_product_ket(
        sp_chain, [(1 / np.sqrt(2), 1 / np.sqrt(2))] + [(1, 0)] * (n - 1))
    obs_eff = {
        "p_down1": normalized_op_observable(
            spins.spin_down_projector(sp_chain, 0)),
    }
    res_eff = evolve_schrodinger(sched_eff, psi0_eff, times=times,
                                 observables=obs_eff, **_tols(cfg))

    p_a1 = np.asarray(res.observables["p_a1"], float)
    p_down1 = np.asarray(res_eff.observables["p_down1"], float)
    columns = {
        "p_a1_full": p_a1,
        "p_b1_full": np.asarray(res.observables["p_b1"], float),
        "excited_full": np.asarray(res.observables["excited"], float),
        "photons_full": np.asarray(res.observables["photons"], float),
        "p_down1_eff": p_down1,
    }
    doc = {"p_a1_full": "site-1 lower-level population, atom-cavity model",
           "p_b1_full": "site-1 upper-level population, atom-cavity model",
           "excited_full": "total optically-excited population (leakage)",
           "photons_full": "total cavity photon number (leakage)",
           "p_down1_eff": "site-1 spin-down population, spin-chain model"}
    dev = series_deviation(times, p_down1, p_a1, scale=1.0)
    summary = {
        "effective_params_MHz": {
            "B": xp.B / 1e6, "B_tilde": zp.B_tilde / 1e6,
            "B_tot": (xp.B + zp.B_tilde) / 1e6,
            "Jx": xp.Jx / 1e6, "Jy": xp.Jy / 1e6, "Jz": zp.Jz / 1e6,
        },
        "frame": {"delta1": delta1,
                  "zz_window_field_MHz": (zp.B_tilde + 0.5 * delta1) / 1e6},
        "regime_ratios": _ratio_values(spins.xy_regime_ratios(xy, warn=False)),
        "max_deviations": {"p_a1_vs_p_down1": dev.max_abs,
                           "t_at_max_s": dev.t_at_max},
        "leakage": {"excited_max": float(np.max(columns["excited_full"])),
                    "photons_max": float(np.max(columns["photons_full"]))},
        "windows": {"window1_s": dt1, "window2_s": dt2, "n_cycles": ncyc},
    }
    return ExperimentOutput(times, columns, doc, summary)


# ---- cluster ------------------------------------------------------------

def _run_cluster(cfg):
    P = cfg.params
    _need(P, ("omega_e", "omega_ab", "Delta_a", "Omega_a", "Omega_b",
              "g_a", "g_b", "hop", "n_sites", "Jz_target", "duration_s"))
    n = int(P["n_sites"])
    geo0 = ArrayGeometry(n, P.get("topology", "chain-open"),
                         hop=P["hop"], omega_C=0.0)
    drive0 = spins.ZZDrive(
        omega_e=P["omega_e"], omega_ab=P["omega_ab"], Delta_a=P["Delta_a"],
        Delta_tilde_a=P.get("Delta_tilde_a", 0.5 * P["Delta_a"]),
        Omega_a=P["Omega_a"], Omega_b=P["Omega_b"],
        Lambda_a=P.get("Lambda_a", 0.0), Lambda_b=P.get("Lambda_b", 0.0),
        g_a=P["g_a"], g_b=P["g_b"], geometry=geo0)
    geo = spins.solve_cavity_frequency_for_jz(drive0, P["Jz_target"])
    drive = replace(drive0, geometry=geo)
    zp = spins.zz_effective_params(drive)

    cut = int(cfg.num("photon_cutoff", 2))
    model = spins.zz_full_model(drive, photon_cutoff=cut, frame_delta1=0.0)
    psi0 = model.atom_product_ket([(1 / np.sqrt(2), 1 / np.sqrt(2), 0.0)] * n)
    T = P["duration_s"]
    times = _grid(cfg, T)
    sched = PulseSchedule((Segment(T, model.terms, label="zz"),))
    obs = {"excited": normalized_op_observable(model.excited_population()),
           "photons": normalized_op_observable(model.photon_number())}
    res = evolve_schrodinger(sched, psi0, times=times, observables=obs,
                             store_states=True, **_tols(cfg))

    atom_labels = [f"a{i}" for i in range(n)]
    ent = np.empty((len(times), n))
    pur = np.empty(len(times))
    disc = np.empty(len(times))
    for k, state in enumerate(res.states):
        d = chain_diagnostics(state, atom_labels,
                              max_discard=float(cfg.num("max_discard", 0.1)))
        ent[k] = d.site_entropy_ln2
        pur[k] = d.chain_purity
        disc[k] = d.discarded_weight

    columns = {}
    doc = {}
    for i in range(n):
        columns[f"S{i}_ln2"] = ent[:, i]
        doc[f"S{i}_ln2"] = f"site-{i} entanglement entropy in multiples of ln 2"
    columns["chain_purity"] = pur
    columns["discarded_weight"] = disc
    columns["excited"] = np.asarray(res.observables["excited"], float)
    columns["photons"] = np.asarray(res.observables["photons"], float)
    doc.update({"chain_purity": "tr rho^2 of the reduced qubit chain",
                "discarded_weight": "population outside the qubit subspace",
                "excited": "total optically-excited population",
                "photons": "total cavity photon number"})

    t_star = np.pi / (4.0 * zp.Jz)
    lo, hi = 30e-6, 60e-6
    window = (times >= lo) & (times <= min(hi, T))
    mean_ent = ent.mean(axis=1)
    if window.any():
        k_best = int(np.argmax(np.where(window, mean_ent, -np.inf)))
        best = {"t_s": float(times[k_best]),
                "mean_entropy_ln2": float(mean_ent[k_best]),
                "min_site_entropy_ln2": float(ent[k_best].min()),
                "chain_purity": float(pur[k_best])}
    else:
        best = None
    summary = {
        "effective_params": {"Jz": zp.Jz, "Jz_MHz": zp.Jz / 1e6,
                             "B_tilde_MHz": zp.B_tilde / 1e6},
        "cavity_placement": {"omega_C": geo.omega_C,
                             "laser_minus_cavity": drive.omega_laser - geo.omega_C},
        "t_star_s": float(t_star),
        "best_in_window_30_60_us": best,
        "max_deviations": {"min_chain_purity": float(np.min(pur))},
        "leakage": {"excited_max": float(np.max(columns["excited"])),
                    "photons_max": float(np.max(columns["photons"])),
                    "discarded_max": float(np.max(disc))},
    }
    return ExperimentOutput(times, columns, doc, summary)


# ---- stirap-check -------------------------------------------------------

def _run_stirap_check(cfg):
    P = cfg.params
    _need(P, ("g13", "N", "Omega", "ramp_duration_s"))
    p = EITAtomParams(g13=P["g13"], g24=P.get("g24", 0.0), Omega=P["Omega"],
                      Delta=P.get("Delta", 0.0), delta=P.get("delta", 0.0),
                      epsilon=P.get("epsilon", 0.0), N=int(P["N"]))
    T = P["ramp_duration_s"]
    Om_end = P.get("Omega_end", 0.0)
    sched, psi0, n2 = stirap_ramp_schedule(p, T, Omega_end=Om_end)
    spc = psi0.space
    obs = {"n2": normalized_op_observable(n2),
           "n_ph": normalized_op_observable(number(spc, "ph")),
           "n3": normalized_op_observable(number(spc, "b3"))}
    times = _grid(cfg, T)
    res = evolve_schrodinger(sched, psi0, times=times, observables=obs,
                             **_tols(cfg))
    columns = {"n2": np.asarray(res.observables["n2"], float),
               "n_ph": np.asarray(res.observables["n_ph"], float),
               "n3": np.asarray(res.observables["n3"], float)}
    doc = {"n2": "metastable-level excitation (transfer target)",
           "n_ph": "cavity photon number",
           "n3": "intermediate-level excitation (diabatic leakage)"}
    summary = {
        "transfer_final": float(columns["n2"][-1]),
        "peak_diabatic_parameter": float(stirap_quality(p, T, Omega_end=Om_end)),
        "ramp": {"Omega_start": p.Omega, "Omega_end": Om_end,
                 "duration_s": T},
    }
    return ExperimentOutput(times, columns, doc, summary)


# ---- params (closed-form effective parameters only) ---------------------

def _run_params(cfg):
    P = cfg.params
    _need(P, ("family",))
    fam = P["family"]
    summary = {"family": fam}
    if fam == "dark-state-bh":
        _need(P, ("g13", "g24", "N", "Delta", "Omega", "hop", "n_sites"))
        p = EITAtomParams(g13=P["g13"], g24=P["g24"], Omega=P["Omega"],
                          Delta=P["Delta"], delta=P.get("delta", 0.0),
                          epsilon=P.get("epsilon", 0.0), N=int(P["N"]))
        geo = ArrayGeometry(int(P["n_sites"]), hop=P["hop"])
        loss = LossRates(kappa=P.get("kappa", 0.0),
                         gamma3=P.get("gamma3", 0.0),
                         gamma4=P.get("gamma4", 0.0))
        bh = dark_state_bh_params(p, geo, loss, n_mean=P.get("n_mean", 1.0))
        summary["effective_params"] = {
            "U": bh.U, "J": bh.J, "mu": bh.mu, "Gamma0": bh.Gamma0,
            "U_over_J": bh.U / bh.J if bh.J else None,
            "U_over_Gamma0": bh.U / bh.Gamma0 if bh.Gamma0 else None,
        }
        summary["regime_ratios"] = _ratio_values(bh_regime_ratios(p, geo))
    elif fam == "two-component":
        _need(P, ("g13", "g24", "N", "Delta", "delta", "Omega", "hop",
                  "omega_C"))
        p = EITAtomParams(g13=P["g13"], g24=P["g24"], Omega=P["Omega"],
                          Delta=P["Delta"], delta=P["delta"],
                          epsilon=P.get("epsilon", 0.0), N=int(P["N"]))
        geo = ArrayGeometry(int(P.get("n_sites", 2)), hop=P["hop"],
                            omega_C=P["omega_C"])
        tc = two_component_bh_params(p, geo)
        summary["effective_params"] = {
            k: getattr(tc, k) for k in ("mu_b", "mu_c", "J_bb", "J_cc",
                                        "J_bc", "U_b", "U_c", "U_bc")}
        summary["effective_params"]["conversion_active"] = tc.conversion_active
    elif fam == "photonic-kerr":
        _need(P, ("g13", "g24", "N", "Delta", "Omega", "kappa", "gamma4"))
        p = EITAtomParams(g13=P["g13"], g24=P["g24"], Omega=P["Omega"],
                          Delta=P["Delta"], N=int(P["N"]))
        loss = LossRates(kappa=P["kappa"], gamma4=P["gamma4"])
        fig = photonic_kerr_figures(p, loss, n_mean=P.get("n_mean", 2.0))
        summary["effective_params"] = {
            "U": fig.U, "U_over_kappa": fig.U_over_kappa,
            "Gamma_full": fig.Gamma_full,
            "U_over_Gamma_full": fig.U_over_Gamma_full}
        summary["note"] = fig.note
    elif fam == "dispersive-kerr":
        _need(P, ("g", "Lambda", "Delta1", "Delta2", "N"))
        kp = _kerr_params(P)
        n = int(P.get("n_init", 1))
        summary["effective_params"] = {
            "Theta": kp.Theta, "kappa_eff": kp.kappa_eff,
            "first_zero_s": float(first_zero_time(kp, n)), "n_init": n}
        summary["regime_ratios"] = _ratio_values(kerr_condition_ratios(kp))
    elif fam == "spin":
        _need(P, ("omega_e", "omega_ab", "Delta_a", "Omega_a", "Omega_b",
                  "g_a", "g_b", "delta1", "hop", "omega_C", "n_sites",
                  "zz_Delta_a", "zz_Delta_tilde_a", "zz_Lambda_a",
                  "zz_Lambda_b"))
        geo = ArrayGeometry(int(P["n_sites"]), hop=P["hop"],
                            omega_C=P["omega_C"])
        xy = spins.XYDrive(omega_e=P["omega_e"], omega_ab=P["omega_ab"],
                           Delta_a=P["Delta_a"], Omega_a=P["Omega_a"],
                           Omega_b=P["Omega_b"], g_a=P["g_a"], g_b=P["g_b"],
                           delta1=P["delta1"], geometry=geo)
        zz = spins.ZZDrive(omega_e=P["omega_e"], omega_ab=P["omega_ab"],
                           Delta_a=P["zz_Delta_a"],
                           Delta_tilde_a=P["zz_Delta_tilde_a"],
                           Omega_a=P["Omega_a"], Omega_b=P["Omega_b"],
                           Lambda_a=P["zz_Lambda_a"],
                           Lambda_b=P["zz_Lambda_b"],
                           g_a=P["g_a"], g_b=P["g_b"], geometry=geo)
        xp = spins.xy_effective_params(xy)
        zp = spins.zz_effective_params(zz)
        comb = spins.combine_spin_params(xp, zp)
        summary["effective_params_MHz"] = {
            "B": comb.B / 1e6, "B_tilde": comb.B_tilde / 1e6,
            "B_tot": comb.B_tot / 1e6, "J1": comb.J1 / 1e6,
            "J2": comb.J2 / 1e6, "Jx": comb.Jx / 1e6, "Jy": comb.Jy / 1e6,
            "Jz": comb.Jz / 1e6}
        summary["regime_ratios"] = _ratio_values(
            spins.xy_regime_ratios(xy, warn=False))
    else:
        raise ConfigError([Issue("error", "params.family",
                                 f"unknown family {fam!r}")])
    return ExperimentOutput(None, {}, {}, summary)


# ---- dispatch, regime ratios, file output -------------------------------

_RUNNERS = {
    "mott-superfluid": _run_mott_superfluid,
    "two-component-sweep": _run_two_component_sweep,
    "kerr-validate": _run_kerr_validate,
    "kerr-noise": _run_kerr_noise,
    "spin-xy": _run_spin_xy,
    "cluster": _run_cluster,
    "stirap-check": _run_stirap_check,
    "params": _run_params,
}


def regime_ratios(cfg):
    """Dispersive-validity ratios for validate-time warnings."""
    P = cfg.params
    e = cfg.experiment
    if e == "mott-superfluid" or (e == "params"
                                  and P.get("family") == "dark-state-bh"):
        key = "Omega_start" if "Omega_start" in P else "Omega"
        p = EITAtomParams(g13=P["g13"], g24=P["g24"], Omega=P[key],
                          Delta=P["Delta"], delta=P.get("delta", 0.0),
                          epsilon=P.get("epsilon", 0.0), N=int(P["N"]))
        geo = ArrayGeometry(int(P.get("n_sites", 2)), hop=P["hop"])
        return _ratio_values(bh_regime_ratios(p, geo))
    if e in ("kerr-validate", "kerr-noise") or (
            e == "params" and P.get("family") == "dispersive-kerr"):
        return _ratio_values(kerr_condition_ratios(_kerr_params(P)))
    if e == "spin-xy" or (e == "params" and P.get("family") == "spin"):
        geo = ArrayGeometry(int(P["n_sites"]), hop=P["hop"],
                            omega_C=P["omega_C"])
        xy = spins.XYDrive(omega_e=P["omega_e"], omega_ab=P["omega_ab"],
                           Delta_a=P["Delta_a"], Omega_a=P["Omega_a"],
                           Omega_b=P["Omega_b"], g_a=P["g_a"], g_b=P["g_b"],
                           delta1=P["delta1"], geometry=geo)
        return _ratio_values(spins.xy_regime_ratios(xy, warn=False))
    if e == "cluster":
        return {"Omega_a/Delta_a": abs(P["Omega_a"] / P["Delta_a"]),
                "Omega_b/Delta_b": abs(P["Omega_b"]
                                       / (P["Delta_a"] - P["omega_ab"]))}
    if e == "stirap-check":
        B = np.sqrt(P["N"] * P["g13"]**2 + P["Omega"]**2)
        return {"1/(B*ramp)": 1.0 / (B * P["ramp_duration_s"])}
    return {}


def _fmt(x):
    return f"{float(x):.11e}"


def write_csv(path, times, columns):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["time_s"] + list(columns))
        cols = [np.asarray(c, dtype=float) for c in columns.values()]
        for k in range(len(times)):
            w.writerow([_fmt(times[k])] + [_fmt(c[k]) for c in cols])


def _resolve_paths(cfg, out_path):
    fmt = cfg.output.get("format", "csv")
    if cfg.experiment == "params":
        fmt = "json"
    ext = "json" if fmt == "json" else "csv"
    target = out_path or cfg.output.get("path") \
        or f"{cfg.experiment.replace('-', '_')}.{ext}"
    env_dir = os.environ.get("CCASIM_OUTDIR")
    directory = env_dir if env_dir else (os.path.dirname(target) or ".")
    stem = os.path.splitext(os.path.basename(target))[0]
    os.makedirs(directory, exist_ok=True)
    base = os.path.join(directory, stem)
    if fmt == "json":
        return fmt, {"summary": base + ".json"}
    return fmt, {"series": base + ".csv", "summary": base + ".summary.json"}


def run_experiment(cfg, out_path=None):
    """Validate, run, and write results; returns the summary record."""
    issues = validate_config(cfg)
    errors = [i for i in issues if i.level == "error"]
    if errors:
        raise ConfigError(errors)
    t0 = time.perf_counter()
    out = _RUNNERS[cfg.experiment](cfg)
    wall = time.perf_counter() - t0

    fmt, paths = _resolve_paths(cfg, out_path)
    summary = {
        "experiment": cfg.experiment,
        "version": __version__,
        "config_sha256": cfg.sha256(),
        "seed": cfg.num("seed"),
        "n_trajectories": int(cfg.num("n_trajectories", 0)),
        "wall_time_s": wall,
        "warnings": [str(i) for i in issues if i.level == "warning"],
        "columns": out.column_doc,
        "files": paths,
    }
    summary.update(out.summary)

    if fmt == "json":
        payload = {"summary": summary}
        if out.times is not None:
            payload["series"] = {
                "time_s": [float(t) for t in out.times],
                **{k: [float(v) for v in col]
                   for k, col in out.columns.items()},
            }
        with open(paths["summary"], "w") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")
    else:
        write_csv(paths["series"], out.times, out.columns)
        with open(paths["summary"], "w") as f:
            json.dump(summary, f, indent=2, sort_keys=True)
            f.write("\n")
    return summary
