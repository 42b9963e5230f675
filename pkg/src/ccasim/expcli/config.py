"""Experiment configuration: YAML loading, unit handling, validation.

Configs are nested mappings with three blocks -- `params` (physical rates),
`numerics` (cutoffs, grids, seeds) and `output` (paths, format).  Any key in
those blocks may carry a unit suffix `_s^-1`, `_MHz` or `_GHz`; values are
converted to angular s^-1 (1, 1e6, 1e9) and the suffix is stripped, so
`kappa_MHz: 0.04` and `kappa: 4.0e4` are the same setting.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field

import yaml

EXPERIMENTS = (
    "mott-superfluid",
    "two-component-sweep",
    "kerr-validate",
    "kerr-noise",
    "spin-xy",
    "cluster",
    "stirap-check",
    "params",
)

_UNIT_SCALES = (("s^-1", 1.0), ("MHz", 1e6), ("GHz", 1e9))


class ConfigError(Exception):
    """Config unusable: carries the list of Issue records."""

    def __init__(self, issues):
        self.issues = tuple(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


@dataclass(frozen=True)
class Issue:
    level: str      # "error" | "warning"
    field: str
    message: str

    def __str__(self):
        return f"[{self.level}] {self.field}: {self.message}"


def strip_units(mapping):
    """Return a copy with unit-suffixed keys scaled to angular s^-1."""
    out = {}
    for key, val in mapping.items():
        if isinstance(val, dict):
            out[key] = strip_units(val)
            continue
        for suffix, scale in _UNIT_SCALES:
            tag = "_" + suffix
            if key.endswith(tag):
                key = key[: -len(tag)]
                val = float(val) * scale
                break
        if key in out:
            raise ConfigError([Issue("error", key,
                                     "same quantity given in two units")])
        out[key] = val
    return out


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    numerics: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    def sha256(self):
        """Hash of the raw config mapping, stable under key order."""
        blob = json.dumps(self.raw, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()

    def num(self, key, default=None):
        return self.numerics.get(key, default)


def parse_config(mapping) -> ExperimentConfig:
    """Build an ExperimentConfig from an already-loaded mapping."""
    if not isinstance(mapping, dict):
        raise ConfigError([Issue("error", "<root>",
                                 "config must be a key/value mapping")])
    issues = []
    if "experiment" not in mapping:
        issues.append(Issue("error", "experiment", "missing required field"))
    for block in ("params", "numerics", "output"):
        if block in mapping and not isinstance(mapping[block], dict):
            issues.append(Issue("error", block, "must be a mapping"))
    if issues:
        raise ConfigError(issues)
    known = {"experiment", "params", "numerics", "output"}
    for key in mapping:
        if key not in known:
            issues.append(Issue("error", key, "unknown top-level field"))
    if issues:
        raise ConfigError(issues)
    try:
        params = strip_units(mapping.get("params", {}))
        numerics = strip_units(mapping.get("numerics", {}))
    except ConfigError:
        raise
    return ExperimentConfig(
        experiment=str(mapping["experiment"]),
        params=params,
        numerics=numerics,
        output=dict(mapping.get("output", {})),
        raw=mapping,
    )


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as f:
            mapping = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError([Issue("error", str(path), f"cannot read: {e}")])
    except yaml.YAMLError as e:
        raise ConfigError([Issue("error", str(path), f"not valid YAML: {e}")])
    if mapping is None:
        raise ConfigError([Issue("error", str(path), "config file is empty")])
    return parse_config(mapping)


# ---- per-experiment schema ----------------------------------------------

# required keys in the params block (after unit stripping)
REQUIRED_PARAMS = {
    "mott-superfluid": ("g13", "g24", "N", "Delta", "Omega_start", "Omega_end",
                        "hop", "n_sites", "duration_s"),
    "two-component-sweep": ("g13", "g24", "N", "Delta", "delta",
                            "Omega_start", "Omega_end", "hop", "omega_C"),
    "kerr-validate": ("g", "Lambda", "Delta1", "Delta2", "N", "n_init",
                      "t_max_s"),
    "kerr-noise": ("g", "Lambda", "Delta1", "Delta2", "N", "n_init",
                   "t_max_s", "kappa", "gamma", "dephasing"),
    "spin-xy": ("omega_e", "omega_ab", "Delta_a", "Omega_a", "Omega_b",
                "g_a", "g_b", "delta1", "hop", "omega_C", "n_sites",
                "zz_Delta_a", "zz_Delta_tilde_a", "zz_Lambda_a", "zz_Lambda_b",
                "window1_s", "window2_s", "n_cycles"),
    "cluster": ("omega_e", "omega_ab", "Delta_a", "Omega_a", "Omega_b",
                "g_a", "g_b", "hop", "n_sites", "Jz_target", "duration_s"),
    "stirap-check": ("g13", "N", "Omega", "ramp_duration_s"),
    "params": ("family",),
}

_NONNUMERIC_PARAMS = {"family", "topology"}


def validate_config(cfg: ExperimentConfig):
    """Schema and sanity checks; returns a list of Issue records.

    Error-level issues make the config unusable; warning-level ones flag
    regime-condition ratios and soft inconsistencies but let the run
    proceed.
    """
    issues = []
    if cfg.experiment not in EXPERIMENTS:
        issues.append(Issue("error", "experiment",
                            f"unknown experiment {cfg.experiment!r}; "
                            f"choose one of {', '.join(EXPERIMENTS)}"))
        return issues

    required = REQUIRED_PARAMS[cfg.experiment]
    for key in required:
        if key not in cfg.params:
            issues.append(Issue("error", f"params.{key}",
                                "missing required field"))
    for key, val in cfg.params.items():
        if key in _NONNUMERIC_PARAMS:
            continue
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            issues.append(Issue("error", f"params.{key}",
                                f"must be a number, got {type(val).__name__}"))
        elif not math.isfinite(val):
            issues.append(Issue("error", f"params.{key}", "must be finite"))

    n_traj = cfg.num("n_trajectories", 0)
    if not isinstance(n_traj, int) or isinstance(n_traj, bool) or n_traj < 0:
        issues.append(Issue("error", "numerics.n_trajectories",
                            "must be a nonnegative integer"))
    elif n_traj > 0 and cfg.num("seed") is None:
        issues.append(Issue("error", "numerics.seed",
                            "required whenever n_trajectories > 0"))
    pts = cfg.num("output_grid_points", 400)
    if not isinstance(pts, int) or isinstance(pts, bool) or pts < 2:
        issues.append(Issue("error", "numerics.output_grid_points",
                            "must be an integer >= 2"))
    fmt = cfg.output.get("format", "csv")
    if fmt not in ("csv", "json"):
        issues.append(Issue("error", "output.format",
                            f"must be 'csv' or 'json', got {fmt!r}"))

    if any(i.level == "error" for i in issues):
        return issues
    issues.extend(_regime_warnings(cfg))
    return issues


def _regime_warnings(cfg):
    """Dispersive-regime ratios as warning Issues (never errors)."""
    from . import runner

    try:
        ratios = runner.regime_ratios(cfg)
    except Exception as e:
        return [Issue("warning", "params",
                      f"could not evaluate regime ratios: {e}")]
    out = []
    for name, value in ratios.items():
        if value > 0.1:
            out.append(Issue("warning", f"ratio.{name}",
                             f"{value:.3g} exceeds the dispersive margin 0.1"))
    return out
