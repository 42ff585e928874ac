"""Game configuration documents (YAML) and their defaults.

A config bundles everything a session needs besides the scenario itself:
the population recipe, trust parameters, optional event rules, and the
quiet-days return rule.  It also carries a colour scale for the paths
that assemble scenarios (played scenarios bring their own embedded
scale).  Parsing errors always name the offending field path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .agents import Distribution, PopulationConfig, TrustParams, VigilanceColour, STRATEGIES
from .engine import EventCategory, EventRule
from .errors import ConfigurationError
from .scenario import ColourScale, default_colour_scale

CONFIG_SCHEMA = "floodwatch-config/1"


@dataclass(frozen=True)
class GameConfig:
    """Everything needed to start a session on some scenario."""

    population: PopulationConfig
    trust: TrustParams = TrustParams()
    colour_scale: ColourScale = field(default_factory=default_colour_scale)
    event_rules: tuple[EventRule, ...] | None = None
    return_after_quiet_days: int = 2


def default_game_config(size: int = 200, seed: int = 42) -> GameConfig:
    return GameConfig(population=PopulationConfig(size=size, seed=seed))


def _require_mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigurationError(f"{path}: expected a mapping")
    return value


def _number(mapping: dict, key: str, path: str, default=None) -> float:
    if key not in mapping:
        if default is not None:
            return default
        raise ConfigurationError(f"{path}.{key}: required")
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{path}.{key}: expected a number")
    return float(value)


def _integer(mapping: dict, key: str, path: str, default=None) -> int:
    value = _number(mapping, key, path, default)
    if value != int(value):
        raise ConfigurationError(f"{path}.{key}: expected an integer")
    return int(value)


def _parse_population(data: dict) -> PopulationConfig:
    path = "population"
    data = _require_mapping(data, path)
    known = {
        "size",
        "trust_init",
        "risk_aversion_threshold",
        "memory_depth",
        "strategy_weights",
        "seed",
    }
    for key in data:
        if key not in known:
            raise ConfigurationError(f"{path}.{key}: unknown field")
    kwargs = {"size": _integer(data, "size", path), "seed": _integer(data, "seed", path, 0)}
    for attr in ("trust_init", "risk_aversion_threshold", "memory_depth"):
        if attr in data:
            kwargs[attr] = Distribution.from_spec(data[attr], f"{path}.{attr}")
    if "strategy_weights" in data:
        weights_map = _require_mapping(data["strategy_weights"], f"{path}.strategy_weights")
        tokens = {s.token for s in STRATEGIES}
        for key in weights_map:
            if key not in tokens:
                raise ConfigurationError(f"{path}.strategy_weights.{key}: unknown strategy")
        kwargs["strategy_weights"] = tuple(
            _number(weights_map, s.token, f"{path}.strategy_weights", 0.0) for s in STRATEGIES
        )
    return PopulationConfig(**kwargs)


def _parse_trust(data: dict) -> TrustParams:
    path = "trust"
    data = _require_mapping(data, path)
    defaults = TrustParams()
    known = {
        "gain_slight",
        "loss_false_alarm_rate",
        "loss_missed_rate",
        "surprise_tolerance_mm",
        "severity_scale_mm",
    }
    for key in data:
        if key not in known:
            raise ConfigurationError(f"{path}.{key}: unknown field")
    return TrustParams(
        gain_slight=_number(data, "gain_slight", path, defaults.gain_slight),
        loss_false_alarm_rate=_number(
            data, "loss_false_alarm_rate", path, defaults.loss_false_alarm_rate
        ),
        loss_missed_rate=_number(data, "loss_missed_rate", path, defaults.loss_missed_rate),
        surprise_tolerance=_number(
            data, "surprise_tolerance_mm", path, defaults.surprise_tolerance
        ),
        severity_scale=_number(data, "severity_scale_mm", path, defaults.severity_scale),
    )


def _parse_scale(data: dict) -> ColourScale:
    path = "scale"
    data = _require_mapping(data, path)
    known = {"yellow_from_mm", "orange_from_mm", "red_from_mm", "official_risk_mm"}
    for key in data:
        if key not in known:
            raise ConfigurationError(f"{path}.{key}: unknown field")
    defaults = default_colour_scale()
    official = list(defaults.to_dict()["official_risk_mm"].values())
    if "official_risk_mm" in data:
        risk_map = _require_mapping(data["official_risk_mm"], f"{path}.official_risk_mm")
        for key in risk_map:
            if key not in {c.token for c in VigilanceColour}:
                raise ConfigurationError(f"{path}.official_risk_mm.{key}: unknown colour")
        official = [
            _number(risk_map, c.token, f"{path}.official_risk_mm", official[c])
            for c in VigilanceColour
        ]
    return ColourScale(
        yellow_from=_number(data, "yellow_from_mm", path, defaults.yellow_from),
        orange_from=_number(data, "orange_from_mm", path, defaults.orange_from),
        red_from=_number(data, "red_from_mm", path, defaults.red_from),
        official_risk_mm=official,
    )


def _parse_events(data: list) -> tuple[EventRule, ...]:
    if not isinstance(data, list):
        raise ConfigurationError("events: expected a list")
    rules = []
    for i, item in enumerate(data):
        path = f"events[{i}]"
        item = _require_mapping(item, path)
        for key in ("id", "category", "message"):
            if not isinstance(item.get(key), str) or not item[key]:
                raise ConfigurationError(f"{path}.{key}: required string")
        try:
            category = EventCategory(item["category"])
        except ValueError:
            raise ConfigurationError(
                f"{path}.category: expected institutional or damage"
            ) from None
        min_announced = None
        if "min_announced" in item:
            try:
                min_announced = VigilanceColour.from_token(str(item["min_announced"]))
            except ValueError as exc:
                raise ConfigurationError(f"{path}.min_announced: {exc}") from None
        min_observed = (
            _number(item, "min_observed_mm", path) if "min_observed_mm" in item else None
        )
        if min_announced is None and min_observed is None:
            raise ConfigurationError(f"{path}: needs min_announced or min_observed_mm")
        rules.append(
            EventRule(
                event_id=item["id"],
                category=category,
                message=item["message"],
                min_announced=min_announced,
                min_observed=min_observed,
            )
        )
    return tuple(rules)


def parse_game_config(data: dict, source: str = "config") -> GameConfig:
    data = _require_mapping(data, source)
    schema = data.get("schema")
    if schema != CONFIG_SCHEMA:
        raise ConfigurationError(
            f"schema: expected {CONFIG_SCHEMA!r}, got {schema!r}"
        )
    known = {"schema", "population", "trust", "scale", "events", "return_after_quiet_days"}
    for key in data:
        if key not in known:
            raise ConfigurationError(f"{key}: unknown field")
    if "population" not in data:
        raise ConfigurationError("population: required")
    population = _parse_population(data["population"])
    trust = _parse_trust(data["trust"]) if "trust" in data else TrustParams()
    scale = _parse_scale(data["scale"]) if "scale" in data else default_colour_scale()
    events = _parse_events(data["events"]) if "events" in data else None
    quiet = _integer(data, "return_after_quiet_days", "config", 2)
    if quiet < 1:
        raise ConfigurationError("return_after_quiet_days: must be >= 1")
    return GameConfig(
        population=population,
        trust=trust,
        colour_scale=scale,
        event_rules=events,
        return_after_quiet_days=quiet,
    )


def load_game_config(path: str | Path) -> GameConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"{path}: cannot read ({exc})") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"{path}: invalid YAML ({exc})") from None
    return parse_game_config(data, source=str(path))
