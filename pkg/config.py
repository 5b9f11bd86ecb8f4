"""
Configuration loading for simulation runs.

A run is described by one JSON document:

    {
      "roi":        {"min": [0, 0], "max": [1000, 1000]},
      "sensors":    [{"id": 0, "x": 500, "y": 500, "r_inner": 25, "r_outer": 80, "theta_h": 60}],
      "deployment": {"m": 150, "r_inner": 25, "r_outer": 80, "theta_h": 60, "margin": 1.0},
      "params":     {"epsilon": 1, "delta": 1, "lambda": 1, "rho_min": 10, ...},
      "experiment": {"seed": 0, "trials": 100, "perturbation": null, "perturbation_mode": "adversarial"},
      "validation": {"area_fixtures": 1000, ...}
    }

"sensors" and "deployment" are mutually exclusive. Angles are degrees.
"""

import json
import math
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from geometry import Point2
from harness import ExperimentConfig, PERTURBATION_MODES
from orientation import AlgoParams, Sensor
from validate import ValidationSettings
from voronoi import Roi


THREADS_ENV_VAR = "RC_THREADS"

# JSON key -> AlgoParams field
PARAM_KEYS = {
    "epsilon": "epsilon",
    "delta": "delta",
    "lambda": "lambda_area",
    "rho_min": "rho_min",
    "rho_max": "rho_max",
    "alpha": "alpha",
    "max_iterations": "max_iterations",
    "rc_shift": "rc_shift",
    "fallback": "fallback",
    "fallback_seed": "fallback_seed",
    "overlap_rule": "overlap_rule",
}
DEPLOYMENT_KEYS = ("m", "r_inner", "r_outer", "theta_h", "margin")
EXPERIMENT_KEYS = ("seed", "trials", "perturbation", "perturbation_mode")
SENSOR_KEYS = ("id", "x", "y", "r_inner", "r_outer", "theta_h")
TOP_LEVEL_KEYS = ("roi", "sensors", "deployment", "params", "experiment", "validation")


class ConfigError(ValueError):
    """Invalid configuration; `field` is a dotted path, `line` the JSON line for syntax errors."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = []
        if field:
            location.append(f"field '{field}'")
        if line is not None:
            location.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(location)})" if location else message)


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI command needs, plus the parsed document for the run manifest."""

    roi: Roi
    params: AlgoParams
    experiment: ExperimentConfig
    sensors: Optional[Tuple[Sensor, ...]]
    validation: ValidationSettings
    document: Dict[str, Any]

    @property
    def has_deployment(self) -> bool:
        return self.sensors is None


def default_threads() -> int:
    """Worker count from RC_THREADS, or 1."""
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}", field=THREADS_ENV_VAR)
    if threads < 1:
        raise ConfigError(f"{THREADS_ENV_VAR} must be at least 1, got {threads}", field=THREADS_ENV_VAR)
    return threads


# ---------------------------------------------------------------------------
# Field readers
# ---------------------------------------------------------------------------

def _require(section: Dict[str, Any], key: str, path: str) -> Any:
    if key not in section:
        raise ConfigError(f"Missing required field '{key}'", field=f"{path}{key}")
    return section[key]


def _number(value: Any, path: str, allow_null: bool = False) -> Optional[float]:
    if value is None and allow_null:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"Expected a number, got {value!r}", field=path)
    if not math.isfinite(value):
        raise ConfigError(f"Expected a finite number, got {value!r}", field=path)
    return float(value)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"Expected an integer, got {value!r}", field=path)
    return value


def _section(document: Dict[str, Any], key: str) -> Dict[str, Any]:
    value = document.get(key, {})
    if not isinstance(value, dict):
        raise ConfigError(f"Expected an object, got {type(value).__name__}", field=key)
    return value


def _check_keys(section: Dict[str, Any], allowed, path: str) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigError(f"Unknown field '{key}'", field=f"{path}{key}")


def _parse_roi(document: Dict[str, Any]) -> Roi:
    roi = _require(document, "roi", "")
    if not isinstance(roi, dict):
        raise ConfigError("Expected an object with 'min' and 'max'", field="roi")
    _check_keys(roi, ("min", "max"), "roi.")
    corners = []
    for key in ("min", "max"):
        value = _require(roi, key, "roi.")
        if not isinstance(value, list) or len(value) != 2:
            raise ConfigError("Expected [x, y]", field=f"roi.{key}")
        corners.append(Point2(_number(value[0], f"roi.{key}[0]"), _number(value[1], f"roi.{key}[1]")))
    try:
        return Roi(corners[0], corners[1])
    except ValueError as e:
        raise ConfigError(str(e), field="roi")


def _parse_params(document: Dict[str, Any]) -> AlgoParams:
    section = _section(document, "params")
    _check_keys(section, PARAM_KEYS, "params.")
    kwargs: Dict[str, Any] = {}
    for key, attr in PARAM_KEYS.items():
        if key not in section:
            continue
        value = section[key]
        path = f"params.{key}"
        if key in ("rc_shift", "fallback", "overlap_rule"):
            if not isinstance(value, str):
                raise ConfigError(f"Expected a string, got {value!r}", field=path)
            kwargs[attr] = value
        elif key in ("max_iterations", "fallback_seed"):
            kwargs[attr] = _integer(value, path)
        elif key in ("rho_max", "alpha"):
            number = _number(value, path, allow_null=True)
            kwargs[attr] = math.inf if number is None else number
        else:
            kwargs[attr] = _number(value, path)
    try:
        return AlgoParams(**kwargs)
    except ValueError as e:
        raise ConfigError(str(e), field="params")


def _parse_sensors(document: Dict[str, Any]) -> Tuple[Sensor, ...]:
    entries = document["sensors"]
    if not isinstance(entries, list) or not entries:
        raise ConfigError("Expected a non-empty list of sensors", field="sensors")
    sensors: List[Sensor] = []
    for i, entry in enumerate(entries):
        path = f"sensors[{i}]."
        if not isinstance(entry, dict):
            raise ConfigError("Expected an object", field=f"sensors[{i}]")
        _check_keys(entry, SENSOR_KEYS, path)
        sensor_id = _integer(entry.get("id", i), f"{path}id")
        try:
            sensors.append(
                Sensor(
                    id=sensor_id,
                    nominal=Point2(
                        _number(_require(entry, "x", path), f"{path}x"),
                        _number(_require(entry, "y", path), f"{path}y"),
                    ),
                    r_inner=_number(_require(entry, "r_inner", path), f"{path}r_inner"),
                    r_outer=_number(_require(entry, "r_outer", path), f"{path}r_outer"),
                    theta_h=math.radians(_number(_require(entry, "theta_h", path), f"{path}theta_h")),
                )
            )
        except ValueError as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(str(e), field=f"sensors[{i}]")
    ids = [s.id for s in sensors]
    if len(set(ids)) != len(ids):
        raise ConfigError("Sensor ids must be unique", field="sensors")
    return tuple(sensors)


def _parse_experiment(document: Dict[str, Any], roi: Roi, params: AlgoParams) -> ExperimentConfig:
    deployment = _section(document, "deployment")
    experiment = _section(document, "experiment")
    _check_keys(deployment, DEPLOYMENT_KEYS, "deployment.")
    _check_keys(experiment, EXPERIMENT_KEYS, "experiment.")

    kwargs: Dict[str, Any] = {"roi": roi, "params": params}
    if "m" in deployment:
        kwargs["m"] = _integer(deployment["m"], "deployment.m")
    for key in ("r_inner", "r_outer", "margin"):
        if key in deployment:
            kwargs[key] = _number(deployment[key], f"deployment.{key}")
    if "theta_h" in deployment:
        kwargs["theta_h"] = math.radians(_number(deployment["theta_h"], "deployment.theta_h"))
    for key in ("seed", "trials"):
        if key in experiment:
            kwargs[key] = _integer(experiment[key], f"experiment.{key}")
    if "perturbation" in experiment:
        kwargs["perturbation"] = _number(experiment["perturbation"], "experiment.perturbation", allow_null=True)
    if "perturbation_mode" in experiment:
        mode = experiment["perturbation_mode"]
        if mode not in PERTURBATION_MODES:
            raise ConfigError(f"Expected one of {PERTURBATION_MODES}, got {mode!r}", field="experiment.perturbation_mode")
        kwargs["perturbation_mode"] = mode
    try:
        return ExperimentConfig(**kwargs)
    except ValueError as e:
        raise ConfigError(str(e), field="deployment")


def _parse_validation(document: Dict[str, Any], seed: int) -> ValidationSettings:
    section = _section(document, "validation")
    allowed = {f.name: f.type for f in fields(ValidationSettings)}
    _check_keys(section, allowed, "validation.")
    kwargs: Dict[str, Any] = {"seed": seed}
    for key, value in section.items():
        path = f"validation.{key}"
        if key == "literal_case1":
            if not isinstance(value, bool):
                raise ConfigError(f"Expected true or false, got {value!r}", field=path)
            kwargs[key] = value
        elif isinstance(getattr(ValidationSettings, key), int):
            kwargs[key] = _integer(value, path)
        else:
            kwargs[key] = _number(value, path)
    return ValidationSettings(**kwargs)


def parse_config(document: Any) -> RunConfig:
    """Validate a decoded config document and build the run configuration."""
    if not isinstance(document, dict):
        raise ConfigError("Config must be a JSON object")
    _check_keys(document, TOP_LEVEL_KEYS, "")
    roi = _parse_roi(document)
    if "sensors" in document and "deployment" in document:
        raise ConfigError("'sensors' and 'deployment' are mutually exclusive", field="sensors")
    if "sensors" not in document and "deployment" not in document:
        raise ConfigError("Missing required field 'sensors' or 'deployment'", field="deployment")

    params = _parse_params(document)
    sensors = _parse_sensors(document) if "sensors" in document else None
    experiment = _parse_experiment(document, roi, params)
    validation = _parse_validation(document, experiment.seed)
    return RunConfig(
        roi=roi,
        params=params,
        experiment=experiment,
        sensors=sensors,
        validation=validation,
        document=document,
    )


def load_config(path: str, verbose: bool = False) -> RunConfig:
    """
    Read and validate a JSON config file.

    Args:
        path: Path to the config file
        verbose: Enable verbose logging

    Returns:
        RunConfig

    Raises:
        ConfigError: unreadable file, JSON syntax error (with line number) or invalid field
    """
    config_file = Path(path)
    if verbose:
        print(f"[CONFIG] Loading {path}...")
    try:
        text = config_file.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON: {e.msg}", line=e.lineno)

    run = parse_config(document)
    if verbose:
        source = f"{len(run.sensors)} explicit sensor(s)" if run.sensors is not None else (
            f"random deployment of {run.experiment.m} sensor(s)"
        )
        print(f"[CONFIG] Loaded {source}; ROI {run.roi.width:g} x {run.roi.height:g}")
    return run
