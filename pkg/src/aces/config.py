"""Metric configuration schema.

Defaults are the tuned best-performing values. A handful of legacy knobs
from earlier experiments are recognized in config files but only at their
pinned values; the alternative composition paths they selected are not
implemented.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from .errors import ConfigError

AVERAGE_STRATEGIES = ("simple", "first", "max", "average")
DISTANCE_TECHNIQUES = ("cosine", "euclidean")

# Legacy option names accepted in config files, each pinned to the single
# supported value. Any other value selects an unimplemented scoring path.
PINNED_LEGACY_OPTIONS: dict[str, object] = {
    "division": 0.998,
    "use_score": "no",
    "overlap_type": "both",
    "F1": 3.798,
    "overall_sbert": False,
    "overall_sbert_weight": 0.5,
    "F1_calc": "max-mean",
    "use_sbert": True,
    "fl_weighing": True,
    "model": "gijs/aces-roberta-13",
}


@dataclass(frozen=True)
class AcesConfig:
    """All switchable behaviour of the metric."""

    fluency_weight: float = 0.5
    fluency_threshold: float = 0.9
    f_beta: float = 9.0
    apply_penalty: bool = True
    penalty_score: int = 1850
    total_labels: int = 13
    average_strategy: str = "max"
    distance_technique: str = "cosine"
    sbert_fallback: bool = True
    include_other_label: bool = False

    def to_json_dict(self) -> dict:
        return asdict(self)


def validate_config(config: AcesConfig) -> AcesConfig:
    """Check every field range; normalizes enumeration casing.

    Returns the (possibly normalized) config or raises ConfigError naming
    the offending field.
    """
    if not 0.0 <= config.fluency_weight <= 1.0:
        raise ConfigError("fluency_weight", "must be in [0, 1]")
    if not 0.0 <= config.fluency_threshold <= 1.0:
        raise ConfigError("fluency_threshold", "must be in [0, 1]")
    if not config.f_beta > 0.0:
        raise ConfigError("f_beta", "must be > 0")
    if not isinstance(config.apply_penalty, bool):
        raise ConfigError("apply_penalty", "must be a boolean")
    if not (isinstance(config.penalty_score, int) and config.penalty_score > 0):
        raise ConfigError("penalty_score", "must be a positive integer")
    if not (isinstance(config.total_labels, int) and config.total_labels > 0):
        raise ConfigError("total_labels", "must be a positive integer")

    strategy = str(config.average_strategy).lower()
    if strategy not in AVERAGE_STRATEGIES:
        raise ConfigError("average_strategy", f"must be one of {AVERAGE_STRATEGIES}")
    technique = str(config.distance_technique).lower()
    if technique not in DISTANCE_TECHNIQUES:
        raise ConfigError("distance_technique", f"must be one of {DISTANCE_TECHNIQUES}")

    if not isinstance(config.sbert_fallback, bool):
        raise ConfigError("sbert_fallback", "must be a boolean")
    if not isinstance(config.include_other_label, bool):
        raise ConfigError("include_other_label", "must be a boolean")

    if strategy != config.average_strategy or technique != config.distance_technique:
        config = replace(config, average_strategy=strategy, distance_technique=technique)
    return config


def _legacy_value_ok(key: str, value: object) -> bool:
    pinned = PINNED_LEGACY_OPTIONS[key]
    if isinstance(pinned, str) and isinstance(value, str):
        return pinned.lower() == value.lower()
    if isinstance(pinned, bool) or isinstance(value, bool):
        return pinned is value
    return pinned == value


def parse_config(data: dict) -> AcesConfig:
    """Build a validated config from a parsed JSON object."""
    if not isinstance(data, dict):
        raise ConfigError("config", "expected a JSON object")

    fields = {}
    known = set(AcesConfig.__dataclass_fields__)
    for key, value in data.items():
        if key in known:
            fields[key] = value
        elif key in PINNED_LEGACY_OPTIONS:
            if not _legacy_value_ok(key, value):
                raise ConfigError(key, "unsupported non-default option")
        else:
            raise ConfigError(key, "unknown config field")

    try:
        config = AcesConfig(**fields)
    except TypeError as exc:
        raise ConfigError("config", str(exc)) from exc
    return validate_config(config)


def load_config(path: str | Path) -> AcesConfig:
    with open(path, encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON in {path}: {exc}") from exc
    return parse_config(data)


def save_config(config: AcesConfig, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(config.to_json_dict(), handle, indent=2, sort_keys=True)
        handle.write("\n")
