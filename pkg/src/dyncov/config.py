"""Strict JSON experiment configuration.

Every level rejects unknown keys, and ``to_dict`` / ``from_dict`` round-trip
losslessly. Errors are :class:`ConfigError` carrying the dotted path of the
offending field.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .model import (
    DirectionDistribution,
    DiscreteSpeed,
    FixedSpeed,
    IntruderSpec,
    Mixture,
    NetworkConfig,
    PointMass,
    SpeedDistribution,
    UniformDirection,
    UniformSpeed,
    VonMises,
)


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _check_keys(obj: Any, allowed: set[str], path: str, required: set[str] = frozenset()) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(path, f"expected an object, got {type(obj).__name__}")
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}" if path else key, "unknown key")
    for key in required:
        if key not in obj:
            raise ConfigError(f"{path}.{key}" if path else key, "missing required key")


def _number(obj: dict, key: str, path: str, default=None, *, allow_none: bool = False,
            integer: bool = False):
    value = obj.get(key, default)
    where = f"{path}.{key}" if path else key
    if value is None:
        if allow_none:
            return None
        raise ConfigError(where, "missing required value")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(where, f"expected a number, got {value!r}")
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(where, f"expected an integer, got {value!r}")
        return int(value)
    if not math.isfinite(value):
        raise ConfigError(where, "must be finite")
    return float(value)


# ---------------------------------------------------------------------------
# Laws
# ---------------------------------------------------------------------------


def speed_law_from_dict(obj: Any, path: str = "network.speed") -> SpeedDistribution:
    _check_keys(obj, {"kind", "value", "low", "high", "values", "weights"}, path, {"kind"})
    kind = obj["kind"]
    try:
        if kind == "fixed":
            _check_keys(obj, {"kind", "value"}, path, {"value"})
            return FixedSpeed(_number(obj, "value", path))
        if kind == "uniform":
            _check_keys(obj, {"kind", "low", "high"}, path, {"low", "high"})
            return UniformSpeed(_number(obj, "low", path), _number(obj, "high", path))
        if kind == "discrete":
            _check_keys(obj, {"kind", "values", "weights"}, path, {"values", "weights"})
            return DiscreteSpeed(tuple(obj["values"]), tuple(obj["weights"]))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(path, str(exc)) from exc
    raise ConfigError(f"{path}.kind", f"unknown speed law {kind!r}")


def speed_law_to_dict(law: SpeedDistribution) -> dict:
    if isinstance(law, FixedSpeed):
        return {"kind": "fixed", "value": law.value}
    if isinstance(law, UniformSpeed):
        return {"kind": "uniform", "low": law.low, "high": law.high}
    return {"kind": "discrete", "values": list(law.values), "weights": list(law.weights)}


def direction_law_from_dict(obj: Any, path: str = "network.direction") -> DirectionDistribution:
    _check_keys(obj, {"kind", "theta", "mu", "kappa", "parts"}, path, {"kind"})
    kind = obj["kind"]
    try:
        if kind == "uniform":
            _check_keys(obj, {"kind"}, path)
            return UniformDirection()
        if kind == "point_mass":
            _check_keys(obj, {"kind", "theta"}, path, {"theta"})
            return PointMass(_number(obj, "theta", path))
        if kind == "von_mises":
            _check_keys(obj, {"kind", "mu", "kappa"}, path, {"mu", "kappa"})
            return VonMises(_number(obj, "mu", path), _number(obj, "kappa", path))
        if kind == "mixture":
            _check_keys(obj, {"kind", "parts"}, path, {"parts"})
            parts = []
            for i, part in enumerate(obj["parts"]):
                ppath = f"{path}.parts[{i}]"
                _check_keys(part, {"weight", "law"}, ppath, {"weight", "law"})
                parts.append((_number(part, "weight", ppath), direction_law_from_dict(part["law"], f"{ppath}.law")))
            return Mixture(tuple(parts))
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(path, str(exc)) from exc
    raise ConfigError(f"{path}.kind", f"unknown direction law {kind!r}")


def direction_law_to_dict(law: DirectionDistribution) -> dict:
    if isinstance(law, UniformDirection):
        return {"kind": "uniform"}
    if isinstance(law, PointMass):
        return {"kind": "point_mass", "theta": law.theta}
    if isinstance(law, VonMises):
        return {"kind": "von_mises", "mu": law.mu, "kappa": law.kappa}
    return {"kind": "mixture",
            "parts": [{"weight": w, "law": direction_law_to_dict(sub)} for w, sub in law.parts]}


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------

_NETWORK_KEYS = {"density", "sensing_radius", "speed", "direction", "turn_interval"}
_INTRUDER_KEYS = {"speed", "direction", "sensing_time", "max_speed"}


def network_from_dict(obj: Any, path: str = "network") -> NetworkConfig:
    _check_keys(obj, _NETWORK_KEYS, path)
    density = _number(obj, "density", path, 1.0)
    radius = _number(obj, "sensing_radius", path, 0.5)
    if density < 0:
        raise ConfigError(f"{path}.density", "must be >= 0")
    if radius <= 0:
        raise ConfigError(f"{path}.sensing_radius", "must be > 0")
    turn = _number(obj, "turn_interval", path, None, allow_none=True)
    if turn is not None and turn <= 0:
        raise ConfigError(f"{path}.turn_interval", "must be > 0 or null")
    return NetworkConfig(
        density,
        radius,
        speed_law_from_dict(obj.get("speed", {"kind": "fixed", "value": 1.0}), f"{path}.speed"),
        direction_law_from_dict(obj.get("direction", {"kind": "uniform"}), f"{path}.direction"),
        turn,
    )


def network_to_dict(net: NetworkConfig) -> dict:
    return {
        "density": net.density,
        "sensing_radius": net.sensing_radius,
        "speed": speed_law_to_dict(net.speed_law),
        "direction": direction_law_to_dict(net.direction_law),
        "turn_interval": net.turn_interval,
    }


def intruder_from_dict(obj: Any, path: str = "intruder") -> IntruderSpec:
    _check_keys(obj, _INTRUDER_KEYS, path)
    vmax = _number(obj, "max_speed", path, None, allow_none=True)
    values = {
        "speed": _number(obj, "speed", path, 0.0),
        "direction": _number(obj, "direction", path, 0.0),
        "sensing_time": _number(obj, "sensing_time", path, 0.0),
        "max_speed": math.inf if vmax is None else vmax,
    }
    for key in ("speed", "sensing_time"):
        if values[key] < 0:
            raise ConfigError(f"{path}.{key}", "must be >= 0")
    if values["speed"] > values["max_speed"]:
        raise ConfigError(f"{path}.speed", "exceeds intruder max_speed")
    return IntruderSpec(**values)


def intruder_to_dict(intr: IntruderSpec) -> dict:
    return {
        "speed": intr.speed,
        "direction": intr.direction,
        "sensing_time": intr.sensing_time,
        "max_speed": None if math.isinf(intr.max_speed) else intr.max_speed,
    }


@dataclass
class OutputSpec:
    dir: str = "dyncov-out"
    format: str = "json"

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ConfigError("output.format", f"must be 'csv' or 'json', got {self.format!r}")


@dataclass
class ExperimentConfig:
    """Resolved configuration for one scenario run.

    ``params`` and ``tolerances`` are scenario specific; the scenario
    registry supplies their defaults and allowed keys.
    """

    scenario: str
    network: NetworkConfig = field(default_factory=lambda: NetworkConfig(1.0, 0.5))
    intruder: IntruderSpec = field(default_factory=IntruderSpec)
    horizon: float | None = None
    replications: int = 1
    test_points: int = 0
    seed: int = 0
    output: OutputSpec = field(default_factory=OutputSpec)
    params: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    TOP_KEYS = ("scenario", "network", "intruder", "horizon", "replications", "test_points",
                "seed", "output", "params", "tolerances")

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "network": network_to_dict(self.network),
            "intruder": intruder_to_dict(self.intruder),
            "horizon": self.horizon,
            "replications": self.replications,
            "test_points": self.test_points,
            "seed": self.seed,
            "output": {"dir": self.output.dir, "format": self.output.format},
            "params": copy.deepcopy(self.params),
            "tolerances": copy.deepcopy(self.tolerances),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, obj: Any) -> ExperimentConfig:
        _check_keys(obj, set(cls.TOP_KEYS), "", {"scenario"})
        if not isinstance(obj["scenario"], str):
            raise ConfigError("scenario", "must be a string")
        horizon = _number(obj, "horizon", "", None, allow_none=True)
        if horizon is not None and horizon <= 0:
            raise ConfigError("horizon", "must be > 0 or null")
        reps = _number(obj, "replications", "", 1, integer=True)
        if reps < 1:
            raise ConfigError("replications", "must be >= 1")
        points = _number(obj, "test_points", "", 0, integer=True)
        if points < 0:
            raise ConfigError("test_points", "must be >= 0")
        seed = _number(obj, "seed", "", 0, integer=True)
        if seed < 0:
            raise ConfigError("seed", "must be >= 0")
        out = obj.get("output", {})
        _check_keys(out, {"dir", "format"}, "output")
        for key in ("params", "tolerances"):
            if not isinstance(obj.get(key, {}), dict):
                raise ConfigError(key, "expected an object")
        return cls(
            scenario=obj["scenario"],
            network=network_from_dict(obj.get("network", {})),
            intruder=intruder_from_dict(obj.get("intruder", {})),
            horizon=horizon,
            replications=reps,
            test_points=points,
            seed=seed,
            output=OutputSpec(**out),
            params=copy.deepcopy(obj.get("params", {})),
            tolerances=copy.deepcopy(obj.get("tolerances", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"invalid JSON: {exc}") from exc
        return cls.from_dict(obj)

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def deep_merge(base: dict, override: dict) -> dict:
    """Recursive dict merge; ``override`` wins, nested dicts merge key by key."""
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict) and "kind" not in value:
            out[key] = deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out
