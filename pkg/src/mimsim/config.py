"""Resolve a :class:`ScenarioConfig` from defaults, a preset, a config file and flags.

Precedence, lowest first: scenario defaults, ``preset``, config file,
command-line flags. The config file is INI-style::

    [model]
    preset = fig2
    delta0 = 20, 40, 60

    [integration]
    n_max = 40

Unknown sections or keys are errors. List-valued keys (``delta0``,
``hop_j``) take comma-separated items; an item may also be a grid
``geom:start:stop:num`` or ``lin:start:stop:num``.
"""
from __future__ import annotations

import configparser
import os
from pathlib import Path

import numpy as np

from .errors import ConfigError, ParameterError
from .experiments import SCENARIOS, ScenarioConfig
from .fock import IntegrationConfig
from .params import ConditionThresholds, ModelParams

OUTPUT_DIR_ENV = "MIMSIM_OUTPUT_DIR"

KEYS = {
    "model": {
        "preset": "fig2 | experiment",
        "units": "scaled (numbers are multiples of g0) | absolute (divide by g0)",
        "omega_m": "mechanical frequency",
        "hop_j": "photon hopping J (list for f-vs-delta0)",
        "g0": "optomechanical coupling",
        "delta0": "modulation amplitude (list for sweeps)",
        "omega_c": "cavity reference frequency",
        "kappa_c": "cavity damping rate",
        "gamma_m": "mechanical damping rate",
        "detuning": "omega_m - 2J held fixed in f-vs-delta0",
    },
    "integration": {
        "dt": "RK4 step, in 1/g0",
        "sample_stride": "record every k-th step",
        "n_max": "phonon truncation",
        "norm_drift_budget": "max |norm^2 - 1|",
        "tail_tolerance": "max top-level occupation",
        "points_per_period": "steps per fastest period when dt is unset",
        "sample_spacing": "target sample spacing when sample_stride is unset",
    },
    "run": {
        "t_end": "final time, in 1/g0",
        "measure_time": "protocol measurement time: ts | treturn | number",
        "sign": "protocol initial superposition sign: + | -",
        "oracle_tolerance": "oracle-check pass threshold",
        "workers": "processes for sweeps",
        "warn_factor": "'much greater' pass factor",
        "fail_factor": "'much greater' fail factor",
    },
    "output": {
        "out": "CSV path",
        "svg": "also write an SVG plot (true/false)",
    },
}

FREQUENCY_KEYS = ("omega_m", "hop_j", "delta0", "omega_c", "kappa_c", "gamma_m", "detuning")
LIST_KEYS = ("delta0", "hop_j")
SWEEP_SCENARIOS = ("fidelity-sweep", "displacement", "f-vs-delta0")

_BASE = {
    "units": "scaled", "omega_m": "201", "hop_j": "100.25", "g0": "1", "delta0": "40",
    "omega_c": "0", "kappa_c": "0", "gamma_m": "0", "measure_time": "ts", "sign": "+",
    "workers": "1", "svg": "false",
}

SCENARIO_DEFAULTS = {
    "fidelity-sweep": {"delta0": "20,40,60", "t_end": "6"},
    "displacement": {"delta0": "20,40,60", "t_end": "7"},
    "f-vs-delta0": {"hop_j": "50.25,100.25,200.25", "delta0": "0,geom:5:300:24",
                    "detuning": "0.5"},
    "protocol": {},
    "check-conditions": {},
    "estimate-phonon": {"kappa_c": "0.1"},
    "oracle-check": {"omega_m": "20.1", "hop_j": "10.025", "delta0": "4", "n_max": "10",
                     "t_end": "1"},
}

PRESETS = {
    "fig2": {"omega_m": "201", "hop_j": "100.25", "g0": "1", "omega_c": "0", "delta0": "40"},
    "experiment": {"omega_m": "1000", "hop_j": "499.75", "g0": "1", "delta0": "40",
                   "kappa_c": "0.1", "omega_c": "0"},
}


def _all_keys():
    return {k for section in KEYS.values() for k in section}


def read_config_file(path):
    """Flatten an INI file into ``{key: str}``, rejecting unknown names."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    flat = {}
    for section in parser.sections():
        if section not in KEYS:
            raise ConfigError(f"unknown config section [{section}]")
        for key, value in parser.items(section):
            if key not in KEYS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            flat[key] = value.strip()
    return flat


def parse_grid(text):
    """Parse ``"0, 5, geom:10:100:5"`` into a list of floats."""
    values = []
    for item in str(text).split(","):
        item = item.strip()
        if not item:
            continue
        if ":" in item:
            kind, *args = item.split(":")
            if kind not in ("geom", "lin") or len(args) != 3:
                raise ConfigError(f"bad grid item {item!r}; use geom:a:b:n or lin:a:b:n")
            try:
                start, stop, num = float(args[0]), float(args[1]), int(args[2])
            except ValueError:
                raise ConfigError(f"bad grid item {item!r}") from None
            if num < 1 or (kind == "geom" and (start <= 0 or stop <= 0)):
                raise ConfigError(f"bad grid item {item!r}")
            grid = np.geomspace(start, stop, num) if kind == "geom" else np.linspace(start, stop, num)
            values.extend(float(v) for v in grid)
        else:
            values.append(_float(item, "list item"))
    if not values:
        raise ConfigError("empty value list")
    return values


def _float(text, key):
    try:
        return float(text)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a number, got {text!r}") from None


def _int(text, key):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be an integer, got {text!r}") from None


def _bool(text, key):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key} must be true/false, got {text!r}")


def resolve_values(scenario, file_values=None, overrides=None):
    """Merge the layers into one ``{key: str}`` mapping."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    file_values = dict(file_values or {})
    overrides = {k: str(v) for k, v in (overrides or {}).items() if v is not None}
    unknown = (set(file_values) | set(overrides)) - _all_keys()
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    values = dict(_BASE)
    values.update(SCENARIO_DEFAULTS[scenario])
    preset = overrides.get("preset", file_values.get("preset"))
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
        layer = dict(PRESETS[preset])
        if preset == "fig2" and scenario in ("fidelity-sweep", "displacement"):
            layer["delta0"] = "20,40,60"
        if scenario == "f-vs-delta0":
            layer.pop("delta0")
        values.update(layer)
    values.update(file_values)
    values.update(overrides)
    return values


def build_config(scenario, config_path=None, overrides=None):
    """Produce a validated :class:`ScenarioConfig` for ``scenario``."""
    file_values = read_config_file(config_path) if config_path else {}
    v = resolve_values(scenario, file_values, overrides)

    lists = {k: parse_grid(v[k]) for k in LIST_KEYS}
    scalars = {k: _float(v[k], k) for k in ("omega_m", "g0", "omega_c", "kappa_c", "gamma_m")}
    detuning = _float(v["detuning"], "detuning") if "detuning" in v else None

    units = v["units"]
    if units == "absolute":
        g0 = scalars["g0"]
        if not g0 > 0:
            raise ConfigError("absolute units need a positive g0")
        for k in ("omega_m", "omega_c", "kappa_c", "gamma_m"):
            scalars[k] /= g0
        for k in LIST_KEYS:
            lists[k] = [x / g0 for x in lists[k]]
        if detuning is not None:
            detuning /= g0
        scalars["g0"] = 1.0
    elif units != "scaled":
        raise ConfigError(f"units must be 'scaled' or 'absolute', got {units!r}")

    if scenario not in SWEEP_SCENARIOS and len(lists["delta0"]) > 1:
        raise ConfigError(f"{scenario} takes a single delta0")
    if scenario != "f-vs-delta0" and len(lists["hop_j"]) > 1:
        raise ConfigError(f"{scenario} takes a single hop_j")

    try:
        params = ModelParams(hop_j=lists["hop_j"][0], delta0=lists["delta0"][0], **scalars)
        integration = IntegrationConfig(
            dt=_float(v["dt"], "dt") if "dt" in v else None,
            sample_stride=_int(v["sample_stride"], "sample_stride") if "sample_stride" in v else None,
            n_max=_int(v["n_max"], "n_max") if "n_max" in v else None,
            **{k: _float(v[k], k) for k in ("norm_drift_budget", "tail_tolerance",
                                            "points_per_period", "sample_spacing") if k in v},
        )
        thresholds = ConditionThresholds(
            **{k: _float(v[k], k) for k in ("warn_factor", "fail_factor") if k in v})
    except (ParameterError, ValueError) as exc:
        raise ConfigError(str(exc)) from None

    measure = v["measure_time"]
    if measure not in ("ts", "treturn"):
        measure = _float(measure, "measure_time")
    sign = {"+": 1, "-": -1, "+1": 1, "-1": -1, "plus": 1, "minus": -1}.get(v["sign"])
    if sign is None:
        raise ConfigError(f"sign must be + or -, got {v['sign']!r}")

    out = v.get("out")
    if out is None:
        out = Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / f"{scenario}.csv"

    return ScenarioConfig(
        scenario=scenario,
        params=params,
        integration=integration,
        delta0_values=tuple(lists["delta0"]) if scenario in SWEEP_SCENARIOS else (),
        hop_j_values=tuple(lists["hop_j"]) if scenario == "f-vs-delta0" else (),
        detuning=detuning,
        t_end=_float(v["t_end"], "t_end") if "t_end" in v else None,
        measure_time=measure,
        sign=sign,
        thresholds=thresholds,
        oracle_tolerance=_float(v.get("oracle_tolerance", "1e-6"), "oracle_tolerance"),
        output_path=Path(out),
        emit_svg=_bool(v["svg"], "svg"),
        workers=_int(v["workers"], "workers"),
    )
