"""Analysis configuration: YAML in, fully resolved nested dict out.

Physical inputs are required; numerical and interpretation settings have
defaults, and every resolved value is echoed into reports.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import yaml

from .curve_geometry import ANALYTIC_FAMILIES
from .equilibrium import B0_FORMS
from .errors import ConfigError
from .frame_fields import COEFFICIENT_NAMES, READINGS
from .perturbation_modes import CONTINUITY_FORMS

LENGTH_CONVENTIONS = ("full", "solar_half_loop")

REQUIRED = {
    "equilibrium": ("c0", "rho0", "p0"),
    "perturbation": ("B1_0", "v1_0", "rho1_0"),
}

DEFAULTS: dict[str, dict[str, Any]] = {
    "curve": {
        "resolution": 2000,
        "closed": False,
        "length_convention": "full",
        "fallback_normal": None,
    },
    "coefficients": {name: 0.0 for name in COEFFICIENT_NAMES},
    "equilibrium": {"gamma": 5.0 / 3.0, "mu0": 4e-7 * np.pi, "b0_form": "printed_34"},
    "perturbation": {"J1_0": 0.0, "branch": "+", "kappa0": None, "station": 0.0},
    "interpretation": {
        "continuity": "printed_41",
        "frame_reading": "consistent",
        "theta_sb": "theta_bs",
        "theta_nb": "theta_ns",
    },
    "tolerances": {"constraint": 1e-6, "degeneracy": 1e-10},
    "oracle": {
        "seed": 20240101,
        "draws": 100,
        "theta_samples": 128,
        "scan": {"im_min": -2.0, "im_max": 2.0, "steps": 401},
        "scan_expansions": 30,
    },
    "sweep": {},
    "run": {"sweep_cap": 1_000_000, "workers": 1, "output_dir": "out"},
}

# bare sweep names and the section that owns them
SWEEPABLE = {
    **{k: "perturbation" for k in ("B1_0", "J1_0", "v1_0", "rho1_0", "kappa0", "station")},
    **{k: "equilibrium" for k in ("c0", "rho0", "p0", "gamma", "mu0")},
    **{k: "coefficients" for k in COEFFICIENT_NAMES},
}

CHOICES = {
    ("equilibrium", "b0_form"): B0_FORMS,
    ("interpretation", "continuity"): CONTINUITY_FORMS,
    ("interpretation", "frame_reading"): READINGS,
    ("interpretation", "theta_sb"): ("theta_bs",),
    ("interpretation", "theta_nb"): ("theta_ns",),
    ("curve", "length_convention"): LENGTH_CONVENTIONS,
}

# the stock solar-loop setup: unit circle, half of it above the surface
SOLAR_LOOP: dict[str, Any] = {
    "curve": {"family": "circle", "radius": 1.0, "turns": 1, "resolution": 2000,
              "length_convention": "solar_half_loop"},
    "coefficients": {"theta_ns": 0.2, "theta_bs": 0.1, "omega_s": 0.0, "omega_n": 0.0,
                     "omega_b": "kappa", "div_n": 0.0, "div_b": 1.0},
    "equilibrium": {"c0": -1.0, "rho0": 1.0, "p0": 1.0, "gamma": 5.0 / 3.0, "mu0": 1.0,
                    "b0_form": "printed_34"},
    "perturbation": {"B1_0": 1.0, "J1_0": 0.0, "v1_0": 0.5, "rho1_0": 1.0, "branch": "+"},
}


def _merge(base: dict, extra: Mapping) -> dict:
    out = copy.deepcopy(base)
    for key, value in extra.items():
        if isinstance(value, Mapping) and isinstance(out.get(key), dict) and key != "sweep":
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _number(cfg, section, key, *, positive=False, nonneg=False, integer=False):
    value = cfg[section].get(key)
    name = f"{section}.{key}"
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(name, f"expected a number, got {value!r}")
    if not np.isfinite(value):
        raise ConfigError(name, "must be finite")
    if integer and int(value) != value:
        raise ConfigError(name, "must be an integer")
    if positive and not value > 0:
        raise ConfigError(name, "must be positive")
    if nonneg and value < 0:
        raise ConfigError(name, "must be non-negative")
    cfg[section][key] = int(value) if integer else float(value)


def _range_values(name: str, entry) -> list[float]:
    if isinstance(entry, Mapping):
        try:
            values = np.linspace(float(entry["start"]), float(entry["stop"]), int(entry["num"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"sweep.{name}", "range needs start, stop and num") from exc
        values = values.tolist()
    elif isinstance(entry, (list, tuple)):
        values = entry
    else:
        values = [entry]
    try:
        values = [float(v) for v in values]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"sweep.{name}", "values must be numbers") from exc
    if not values or not all(np.isfinite(values)):
        raise ConfigError(f"sweep.{name}", "needs at least one finite value")
    return sorted(values)


def _check_coefficient(name: str, entry):
    key = f"coefficients.{name}"
    if isinstance(entry, str):
        if entry != "kappa":
            raise ConfigError(key, "the only symbolic profile is 'kappa'")
        return entry
    if isinstance(entry, Mapping):
        if set(entry) != {"s", "value"}:
            raise ConfigError(key, "table needs exactly the keys 's' and 'value'")
        s = np.asarray(entry["s"], dtype=float)
        v = np.asarray(entry["value"], dtype=float)
        if s.ndim != 1 or s.shape != v.shape or len(s) < 2 or np.any(np.diff(s) <= 0):
            raise ConfigError(key, "table needs >= 2 increasing s values with matching values")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(v))):
            raise ConfigError(key, "table values must be finite")
        return {"s": s.tolist(), "value": v.tolist()}
    if isinstance(entry, bool) or not isinstance(entry, (int, float)) or not np.isfinite(entry):
        raise ConfigError(key, f"expected a number, 'kappa' or a table, got {entry!r}")
    return float(entry)


@dataclass
class AnalysisConfig:
    """Resolved configuration plus the directory relative paths refer to."""

    data: dict[str, Any]
    base_dir: Path = field(default_factory=Path.cwd)

    def __getitem__(self, section: str) -> dict[str, Any]:
        return self.data[section]

    def to_dict(self) -> dict[str, Any]:
        return copy.deepcopy(self.data)

    def sweep_ranges(self) -> dict[str, list[float]]:
        return {k: list(v) for k, v in sorted(self.data["sweep"].items())}

    def with_values(self, values: Mapping[str, float]) -> "AnalysisConfig":
        """Copy with swept parameters set; the sweep section is dropped."""
        data = copy.deepcopy(self.data)
        data["sweep"] = {}
        for name, value in values.items():
            data[SWEEPABLE[name]][name] = value
        return AnalysisConfig(data, self.base_dir)

    def with_overrides(self, *, seed=None, resolution=None) -> "AnalysisConfig":
        data = copy.deepcopy(self.data)
        if seed is not None:
            data["oracle"]["seed"] = int(seed)
        if resolution is not None:
            data["curve"]["resolution"] = int(resolution)
        return parse_config(data, self.base_dir)


def parse_config(raw: Mapping[str, Any], base_dir: Path | str | None = None) -> AnalysisConfig:
    """Validate a config mapping and fill defaults."""
    if not isinstance(raw, Mapping):
        raise ConfigError("<root>", "config must be a mapping")
    unknown = set(raw) - set(DEFAULTS)
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown section")
    for section, keys in REQUIRED.items():
        for key in keys:
            if key not in (raw.get(section) or {}):
                raise ConfigError(key, f"missing required field {section}.{key}")
    if "curve" not in raw or not (
        "family" in raw["curve"] or "points_file" in raw["curve"] or "points" in raw["curve"]
    ):
        raise ConfigError("curve", "needs 'family', 'points' or 'points_file'")

    cfg = _merge(DEFAULTS, raw)

    curve = cfg["curve"]
    fam = curve.get("family")
    if fam is not None and fam not in ANALYTIC_FAMILIES:
        raise ConfigError("curve.family", f"unknown family {fam!r}")
    _number(cfg, "curve", "resolution", positive=True, integer=True)
    if curve["resolution"] < 4:
        raise ConfigError("curve.resolution", "must be at least 4")

    for name in list(cfg["coefficients"]):
        if name not in COEFFICIENT_NAMES:
            raise ConfigError(f"coefficients.{name}", "unknown coefficient")
        cfg["coefficients"][name] = _check_coefficient(name, cfg["coefficients"][name])

    for key in ("c0", "rho0", "p0"):
        _number(cfg, "equilibrium", key)
    _number(cfg, "equilibrium", "gamma")
    _number(cfg, "equilibrium", "mu0")

    pert = cfg["perturbation"]
    for key in ("B1_0", "J1_0", "v1_0", "rho1_0", "station"):
        _number(cfg, "perturbation", key)
    if not 0.0 <= pert["station"] <= 1.0:
        raise ConfigError("perturbation.station", "must lie in [0, 1] (fraction of length)")
    if pert["kappa0"] is not None:
        _number(cfg, "perturbation", "kappa0")
    if pert["branch"] not in ("+", "-"):
        raise ConfigError("perturbation.branch", "must be '+' or '-'")

    for (section, key), allowed in CHOICES.items():
        if cfg[section][key] not in allowed:
            raise ConfigError(f"{section}.{key}", f"expected one of {list(allowed)}")

    for key in ("constraint", "degeneracy"):
        _number(cfg, "tolerances", key, positive=True)
    for key in ("seed", "draws", "theta_samples", "scan_expansions"):
        _number(cfg, "oracle", key, integer=True, nonneg=True)
    scan = cfg["oracle"]["scan"]
    try:
        scan = {"im_min": float(scan["im_min"]), "im_max": float(scan["im_max"]),
                "steps": int(scan["steps"])}
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("oracle.scan", "needs im_min, im_max and steps") from exc
    if scan["steps"] < 3 or not scan["im_max"] > scan["im_min"]:
        raise ConfigError("oracle.scan", "needs im_max > im_min and steps >= 3")
    cfg["oracle"]["scan"] = scan
    _number(cfg, "run", "sweep_cap", positive=True, integer=True)
    _number(cfg, "run", "workers", positive=True, integer=True)

    sweep = {}
    for name, entry in (cfg["sweep"] or {}).items():
        if name not in SWEEPABLE:
            raise ConfigError(f"sweep.{name}", f"not sweepable; choose from {sorted(SWEEPABLE)}")
        sweep[name] = _range_values(name, entry)
    cfg["sweep"] = dict(sorted(sweep.items()))

    base = Path(base_dir) if base_dir is not None else Path.cwd()
    if curve.get("points_file") is not None:
        path = base / curve["points_file"]
        if not path.is_file():
            raise ConfigError("curve.points_file", f"file not found: {curve['points_file']}")
    return AnalysisConfig(cfg, base)


def load_config(path: Path | str) -> AnalysisConfig:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError("<config>", f"file not found: {path}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError("<config>", f"invalid YAML: {exc}") from exc
    return parse_config(raw or {}, path.parent)


def default_config() -> AnalysisConfig:
    return parse_config(SOLAR_LOOP)
