"""Layered run configuration: built-in defaults < config file < command flags.

A system file (YAML, or JSON since JSON is valid YAML) looks like::

    offsets_hz: [250.0, 165.8, 0.0]      # or {I: 250.0, S: 165.8, R: 0.0}
    j_hz: {IS: -10.1, IR: 11.3, SR: 4.3} # or a symmetric 3x3 matrix
    coupling_model: strong
    dt_s: 5.0e-5
    pulse:
      shape: gaussian
      duration_s: 0.65
      truncation: 0.01

An acquisition file has keys ``dwell_s``, ``points``, ``t2_s``, ``t2_star_s``,
``apodization`` and ``relaxation``.  All keys are optional.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import yaml

from .pulses import DEFAULT_DT, SPIN_NAMES, SoftPulse, SpinSystem
from .spectrum import AcquisitionParams

ENV_VAR = "SPINLAB_CONFIG"

_SYSTEM_KEYS = {"offsets_hz", "j_hz", "coupling_model", "spectrometer_mhz", "dt_s", "pulse"}
_PULSE_KEYS = {"shape", "duration_s", "truncation"}
_ACQ_KEYS = {"dwell_s", "points", "t2_s", "t2_star_s", "apodization", "relaxation"}


class ConfigError(ValueError):
    """Unreadable or invalid configuration."""


@dataclass(frozen=True)
class SimulationConfig:
    system: SpinSystem = field(default_factory=SpinSystem.default)
    pulse: SoftPulse = field(default_factory=SoftPulse)
    acquisition: AcquisitionParams = field(default_factory=AcquisitionParams)
    dt: float = DEFAULT_DT


def read_mapping(path: str | Path) -> dict[str, Any]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping at top level")
    return data


def _check_keys(data: Mapping, allowed: set[str], where: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown {where} key(s): {', '.join(unknown)}")


def _offsets(value) -> tuple[float, float, float]:
    if isinstance(value, Mapping):
        _check_keys(value, set(SPIN_NAMES), "offsets_hz")
        defaults = dict(zip(SPIN_NAMES, SpinSystem().offsets_hz))
        return tuple(float(value.get(k, defaults[k])) for k in SPIN_NAMES)
    if len(value) != 3:
        raise ConfigError("offsets_hz needs three values (I, S, R)")
    return tuple(float(v) for v in value)


def _couplings(value) -> tuple[tuple[float, ...], ...]:
    if isinstance(value, Mapping):
        j = np.array(SpinSystem().j_hz)
        for key, v in value.items():
            key = str(key).upper()
            if len(key) != 2 or any(c not in SPIN_NAMES for c in key) or key[0] == key[1]:
                raise ConfigError(f"bad coupling key {key!r}; use pairs like IS, IR, SR")
            a, b = SPIN_NAMES.index(key[0]), SPIN_NAMES.index(key[1])
            j[a, b] = j[b, a] = float(v)
        return tuple(map(tuple, j))
    j = np.asarray(value, dtype=float)
    if j.shape != (3, 3):
        raise ConfigError("j_hz matrix must be 3x3")
    return tuple(map(tuple, j))


def apply_system(cfg: SimulationConfig, data: Mapping[str, Any]) -> SimulationConfig:
    _check_keys(data, _SYSTEM_KEYS, "system")
    sys_changes = {}
    if "offsets_hz" in data:
        sys_changes["offsets_hz"] = _offsets(data["offsets_hz"])
    if "j_hz" in data:
        sys_changes["j_hz"] = _couplings(data["j_hz"])
    if "coupling_model" in data:
        sys_changes["coupling"] = data["coupling_model"]
    if "spectrometer_mhz" in data:
        sys_changes["spectrometer_mhz"] = float(data["spectrometer_mhz"])
    pulse_changes = {}
    pulse_data = data.get("pulse") or {}
    _check_keys(pulse_data, _PULSE_KEYS, "pulse")
    if "shape" in pulse_data:
        pulse_changes["shape"] = pulse_data["shape"]
    if "duration_s" in pulse_data:
        pulse_changes["duration"] = float(pulse_data["duration_s"])
    if "truncation" in pulse_data:
        pulse_changes["truncation"] = float(pulse_data["truncation"])
    try:
        return replace(
            cfg,
            system=replace(cfg.system, **sys_changes),
            pulse=replace(cfg.pulse, **pulse_changes),
            dt=float(data.get("dt_s", cfg.dt)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def apply_acquisition(cfg: SimulationConfig, data: Mapping[str, Any]) -> SimulationConfig:
    _check_keys(data, _ACQ_KEYS, "acquisition")
    names = {"dwell_s": "dwell", "t2_s": "t2", "t2_star_s": "t2_star"}
    changes = {names.get(k, k): v for k, v in data.items()}
    try:
        return replace(cfg, acquisition=replace(cfg.acquisition, **changes))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load(
    config: str | Path | None = None,
    acq: str | Path | None = None,
    dt: float | None = None,
    coupling: str | None = None,
    env: Mapping[str, str] | None = None,
) -> SimulationConfig:
    """Build a config from defaults, then files, then explicit overrides.

    ``config`` falls back to the ``SPINLAB_CONFIG`` environment variable.
    """
    env = os.environ if env is None else env
    config = config or env.get(ENV_VAR) or None
    cfg = SimulationConfig()
    if config:
        cfg = apply_system(cfg, read_mapping(config))
    if acq:
        cfg = apply_acquisition(cfg, read_mapping(acq))
    if coupling is not None:
        cfg = apply_system(cfg, {"coupling_model": coupling})
    if dt is not None:
        cfg = replace(cfg, dt=float(dt))
    if cfg.dt <= 0:
        raise ConfigError("dt_s must be positive")
    return cfg
