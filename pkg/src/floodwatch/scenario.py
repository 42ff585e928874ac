"""Vigilance scale, daily scenarios, archive ingestion, and generators.

A scenario is an immutable, ordered run of days: what fell, what the
forecast said, and (for replayed archives) what colour was actually
announced.  Scenarios come from two routes: ingesting public-archive style
CSV series (daily rain plus vigilance bulletins) or generating pedagogical
episode sequences from templates.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .agents import _SEED_MASK, COLOURS, VigilanceColour
from .errors import ConfigurationError, IngestionError, ScenarioError

SCENARIO_SCHEMA = "floodwatch-scenario/1"

RAIN_HEADER = ("date", "rain_mm")
VIGILANCE_HEADER = ("date", "colour")

# Archive convention: millimetres with at most one fractional digit.
_RAIN_PATTERN = re.compile(r"^\d+(\.\d)?$")


class ColourScale:
    """Maps 24-hour rainfall to vigilance colours and official risk figures.

    Bands are half-open: green below ``yellow_from``, yellow up to
    ``orange_from``, orange up to ``red_from``, red above.  Each colour has
    an official risk in millimetres, the headline figure an announcement of
    that colour communicates; it must sit inside the colour's own band.
    """

    __slots__ = ("yellow_from", "orange_from", "red_from", "_official")

    def __init__(
        self,
        yellow_from: float = 10.0,
        orange_from: float = 50.0,
        red_from: float = 100.0,
        official_risk_mm: Sequence[float] = (5.0, 30.0, 75.0, 150.0),
    ) -> None:
        if not 0.0 < yellow_from < orange_from < red_from:
            raise ConfigurationError("scale: need 0 < yellow_from < orange_from < red_from")
        if len(official_risk_mm) != len(COLOURS):
            raise ConfigurationError("scale.official_risk_mm: need one figure per colour")
        self.yellow_from = float(yellow_from)
        self.orange_from = float(orange_from)
        self.red_from = float(red_from)
        self._official = tuple(float(v) for v in official_risk_mm)
        for colour in COLOURS:
            low, high = self.band(colour)
            risk = self._official[colour]
            if risk < low or (high is not None and risk >= high):
                raise ConfigurationError(
                    f"scale.official_risk_mm.{colour.token}: {risk} outside band"
                )

    def band(self, colour: VigilanceColour) -> tuple[float, float | None]:
        edges = (0.0, self.yellow_from, self.orange_from, self.red_from, None)
        return edges[colour], edges[colour + 1]

    def official_risk(self, colour: VigilanceColour) -> float:
        return self._official[colour]

    def colour_for(self, rain_mm: float) -> VigilanceColour:
        if rain_mm < 0.0:
            raise ValueError("rainfall must be >= 0")
        if rain_mm >= self.red_from:
            return VigilanceColour.RED
        if rain_mm >= self.orange_from:
            return VigilanceColour.ORANGE
        if rain_mm >= self.yellow_from:
            return VigilanceColour.YELLOW
        return VigilanceColour.GREEN

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ColourScale)
            and self.yellow_from == other.yellow_from
            and self.orange_from == other.orange_from
            and self.red_from == other.red_from
            and self._official == other._official
        )

    def __repr__(self) -> str:
        return (
            f"ColourScale(yellow_from={self.yellow_from}, orange_from={self.orange_from}, "
            f"red_from={self.red_from}, official_risk_mm={self._official})"
        )

    def to_dict(self) -> dict:
        return {
            "yellow_from_mm": self.yellow_from,
            "orange_from_mm": self.orange_from,
            "red_from_mm": self.red_from,
            "official_risk_mm": {c.token: self._official[c] for c in COLOURS},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ColourScale":
        try:
            official = data["official_risk_mm"]
            return cls(
                yellow_from=data["yellow_from_mm"],
                orange_from=data["orange_from_mm"],
                red_from=data["red_from_mm"],
                official_risk_mm=[official[c.token] for c in COLOURS],
            )
        except (KeyError, TypeError) as exc:
            raise ConfigurationError(f"scale: malformed ({exc!r})") from None


def default_colour_scale() -> ColourScale:
    return ColourScale()


@dataclass(frozen=True)
class ScenarioDay:
    """One playable day: the forecast shown before the choice, the truth after."""

    date: dt.date
    observed_rain: float
    forecast_rain: float
    forecast_confidence: float
    historical_colour: VigilanceColour | None = None

    def __post_init__(self) -> None:
        if self.observed_rain < 0.0 or self.forecast_rain < 0.0:
            raise ScenarioError(f"{self.date}: rain values must be >= 0")
        if not 0.0 <= self.forecast_confidence <= 1.0:
            raise ScenarioError(f"{self.date}: forecast confidence must lie in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "date": self.date.isoformat(),
            "observed_rain_mm": self.observed_rain,
            "forecast_rain_mm": self.forecast_rain,
            "forecast_confidence": self.forecast_confidence,
            "historical_colour": None
            if self.historical_colour is None
            else self.historical_colour.token,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioDay":
        colour = data.get("historical_colour")
        return cls(
            date=dt.date.fromisoformat(data["date"]),
            observed_rain=float(data["observed_rain_mm"]),
            forecast_rain=float(data["forecast_rain_mm"]),
            forecast_confidence=float(data["forecast_confidence"]),
            historical_colour=None if colour is None else VigilanceColour.from_token(colour),
        )


@dataclass(frozen=True)
class Scenario:
    """An immutable run of consecutive days plus the scale they play under.

    ``provenance`` records where the days came from: "historical" for
    archive-built runs, "generated" for template output.  Generated runs
    carry the seed that produced them.
    """

    name: str
    days: tuple[ScenarioDay, ...]
    colour_scale: ColourScale = field(default_factory=default_colour_scale)
    provenance: str = "historical"
    seed: int | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ScenarioError("scenario name must not be empty")
        if not self.days:
            raise ScenarioError("scenario must contain at least one day")
        if self.provenance not in ("historical", "generated"):
            raise ScenarioError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "days", tuple(self.days))
        for prev, cur in zip(self.days, self.days[1:]):
            if (cur.date - prev.date).days != 1:
                raise ScenarioError(
                    f"days must advance one calendar day at a time; "
                    f"{prev.date} is followed by {cur.date}"
                )

    def __len__(self) -> int:
        return len(self.days)

    @property
    def start_date(self) -> dt.date:
        return self.days[0].date

    @property
    def end_date(self) -> dt.date:
        return self.days[-1].date

    @property
    def has_historical_colours(self) -> bool:
        return all(day.historical_colour is not None for day in self.days)

    def to_dict(self) -> dict:
        return {
            "schema": SCENARIO_SCHEMA,
            "name": self.name,
            "provenance": self.provenance,
            "seed": self.seed,
            "scale": self.colour_scale.to_dict(),
            "days": [day.to_dict() for day in self.days],
        }

    def dump_json(self) -> str:
        """Serialize with one compact day object per line (diff-friendly)."""
        doc = self.to_dict()
        day_lines = ",\n    ".join(
            json.dumps(day, sort_keys=True, separators=(", ", ": ")) for day in doc.pop("days")
        )
        head = json.dumps(doc, sort_keys=True, indent=2)
        return head[: head.rindex("\n}")] + ',\n  "days": [\n    ' + day_lines + "\n  ]\n}\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        if data.get("schema") != SCENARIO_SCHEMA:
            raise ScenarioError(
                f"unsupported scenario schema {data.get('schema')!r}; expected {SCENARIO_SCHEMA}"
            )
        try:
            return cls(
                name=data["name"],
                days=tuple(ScenarioDay.from_dict(day) for day in data["days"]),
                colour_scale=ColourScale.from_dict(data["scale"]),
                provenance=data["provenance"],
                seed=data["seed"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"malformed scenario document: {exc}") from None

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dump_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Scenario":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: not valid JSON ({exc})") from None
        return cls.from_dict(data)


# --- CSV ingestion -------------------------------------------------------


def _rows(source, expected_header: tuple[str, str], label: str):
    """Yield (line_number, row) after checking the header line."""
    if hasattr(source, "read"):
        text, name = source.read(), getattr(source, "name", label)
    else:
        text, name = Path(source).read_text(encoding="utf-8"), str(source)
    reader = csv.reader(io.StringIO(text))
    rows = [(lineno, row) for lineno, row in enumerate(reader, start=1) if row]
    if not rows or tuple(rows[0][1]) != expected_header:
        raise IngestionError(f"{name}:1: expected header {','.join(expected_header)}")
    if len(rows) == 1:
        raise IngestionError(f"{name}: no data rows")
    return name, rows[1:]


def _parse_date(name: str, lineno: int, text: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise IngestionError(f"{name}:{lineno}: invalid date {text!r} (expected YYYY-MM-DD)") from None


def load_rain_series(source) -> list[tuple[dt.date, float]]:
    """Parse a daily rain CSV (``date,rain_mm``) into an ordered series.

    The series must be contiguous (every calendar day exactly once, in
    order) and every value a non-negative amount with at most one decimal
    digit.  Violations raise IngestionError naming the offending line.
    """
    name, rows = _rows(source, RAIN_HEADER, "rain series")
    series: list[tuple[dt.date, float]] = []
    for lineno, row in rows:
        if len(row) != 2:
            raise IngestionError(f"{name}:{lineno}: expected 2 fields, got {len(row)}")
        day = _parse_date(name, lineno, row[0])
        value = row[1].strip()
        if not _RAIN_PATTERN.match(value):
            raise IngestionError(
                f"{name}:{lineno}: invalid rain value {row[1]!r} "
                "(non-negative mm, at most one decimal digit)"
            )
        if series:
            gap = (day - series[-1][0]).days
            if gap < 1:
                raise IngestionError(f"{name}:{lineno}: date {day} is not after {series[-1][0]}")
            if gap > 1:
                raise IngestionError(
                    f"{name}:{lineno}: gap before {day}; series must cover every day"
                )
        series.append((day, float(value)))
    return series


def dump_rain_series(series: Iterable[tuple[dt.date, float]]) -> str:
    lines = [",".join(RAIN_HEADER)]
    lines += [f"{day.isoformat()},{value:.1f}" for day, value in series]
    return "\n".join(lines) + "\n"


def load_vigilance_series(source) -> list[tuple[dt.date, VigilanceColour]]:
    """Parse a vigilance CSV (``date,colour``) into a date-sorted series.

    Bulletins may appear in any order and repeat; several entries on one
    date collapse to the highest colour.  Dates with no entry simply do not
    appear (they default to green downstream).
    """
    name, rows = _rows(source, VIGILANCE_HEADER, "vigilance series")
    by_date: dict[dt.date, VigilanceColour] = {}
    for lineno, row in rows:
        if len(row) != 2:
            raise IngestionError(f"{name}:{lineno}: expected 2 fields, got {len(row)}")
        day = _parse_date(name, lineno, row[0])
        token = row[1].strip()
        if token != token.lower():
            raise IngestionError(f"{name}:{lineno}: colour tokens are lowercase, got {row[1]!r}")
        try:
            colour = VigilanceColour.from_token(token)
        except ValueError:
            raise IngestionError(f"{name}:{lineno}: unknown colour {row[1]!r}") from None
        if day in by_date:
            by_date[day] = max(by_date[day], colour)
        else:
            by_date[day] = colour
    return sorted(by_date.items())


def dump_vigilance_series(series: Iterable[tuple[dt.date, VigilanceColour]]) -> str:
    lines = [",".join(VIGILANCE_HEADER)]
    lines += [f"{day.isoformat()},{colour.token}" for day, colour in series]
    return "\n".join(lines) + "\n"


# --- Forecast models -----------------------------------------------------


class PerfectForecast:
    """Oracle forecasts: exactly the observed rain, full confidence."""

    seed: int | None = None

    def forecast(self, observed_rain: float) -> tuple[float, float]:
        return observed_rain, 1.0


class NoisyForecast:
    """Multiplicative-noise forecasts with confidence falling as noise grows.

    Each call draws one relative error from Normal(0, spread); the stated
    confidence is 1 minus the absolute relative error, clipped to [0, 1].
    Instances are single-use streams: rebuild with the same seed to get the
    identical sequence.
    """

    def __init__(self, seed: int, spread: float = 0.35) -> None:
        if spread <= 0.0:
            raise ConfigurationError("forecast spread must be > 0")
        self.seed = seed
        self.spread = float(spread)
        self._rng = np.random.default_rng([seed & _SEED_MASK, 0xF0C])

    def forecast(self, observed_rain: float) -> tuple[float, float]:
        error = float(self._rng.normal(0.0, self.spread))
        forecast = max(0.0, observed_rain * (1.0 + error))
        confidence = min(1.0, max(0.0, 1.0 - abs(error)))
        return round(forecast, 1), round(confidence, 3)


def build_historical_scenario(
    rain_series: Sequence[tuple[dt.date, float]],
    vigilance_series: Sequence[tuple[dt.date, VigilanceColour]],
    forecast_model,
    *,
    name: str,
    colour_scale: ColourScale | None = None,
) -> Scenario:
    """Assemble a replayable scenario from ingested archive series.

    The rain series defines the date range; vigilance entries must all fall
    inside it (days without a bulletin count as green).  Forecasts come
    from ``forecast_model``, called once per day in date order, so a seeded
    model yields the same scenario on every build.
    """
    if not rain_series:
        raise ScenarioError("rain series is empty")
    rain_dates = {day for day, _ in rain_series}
    stray = sorted(day for day, _ in vigilance_series if day not in rain_dates)
    if stray:
        shown = ", ".join(day.isoformat() for day in stray[:5])
        more = "" if len(stray) <= 5 else f" (+{len(stray) - 5} more)"
        raise ScenarioError(f"vigilance entries outside the rain series range: {shown}{more}")
    announced = dict(vigilance_series)
    days = []
    for day, observed in rain_series:
        forecast, confidence = forecast_model.forecast(observed)
        days.append(
            ScenarioDay(
                date=day,
                observed_rain=observed,
                forecast_rain=forecast,
                forecast_confidence=confidence,
                historical_colour=announced.get(day, VigilanceColour.GREEN),
            )
        )
    return Scenario(
        name=name,
        days=tuple(days),
        colour_scale=colour_scale or default_colour_scale(),
        provenance="historical",
        seed=getattr(forecast_model, "seed", None),
    )


# --- Pedagogical generator -----------------------------------------------


@dataclass(frozen=True)
class EpisodeTemplate:
    """A named day pattern: how to draw it and what must hold afterwards."""

    name: str
    draw: Callable[[np.random.Generator, ColourScale], tuple[float, float, float]]
    satisfied_by: Callable[[ScenarioDay, ColourScale], bool]


def _quiet_draw(rng, scale):
    observed = rng.uniform(0.0, scale.yellow_from * 0.8)
    forecast = min(max(0.0, observed + rng.normal(0.0, 1.5)), scale.yellow_from - 0.2)
    return observed, forecast, rng.uniform(0.75, 0.95)


def _showers_draw(rng, scale):
    observed = rng.uniform(scale.yellow_from, scale.orange_from - 0.2)
    forecast = min(
        max(observed + rng.normal(0.0, 4.0), scale.yellow_from), scale.orange_from - 0.2
    )
    return observed, forecast, rng.uniform(0.7, 0.9)


def _false_alarm_draw(rng, scale):
    forecast = rng.uniform(scale.orange_from + 1.0, scale.red_from - 1.0)
    observed = rng.uniform(0.0, scale.yellow_from - 0.2)
    return observed, forecast, rng.uniform(0.45, 0.75)


def _surprise_flood_draw(rng, scale):
    forecast = rng.uniform(0.0, scale.yellow_from - 0.2)
    observed = rng.uniform(scale.red_from, scale.red_from * 2.5)
    return observed, forecast, rng.uniform(0.5, 0.8)


def _heavy_storm_draw(rng, scale):
    forecast = rng.uniform(scale.red_from, scale.red_from * 2.0)
    observed = rng.uniform(scale.red_from, scale.red_from * 2.5)
    return observed, forecast, rng.uniform(0.6, 0.85)


TEMPLATES: dict[str, EpisodeTemplate] = {
    "quiet": EpisodeTemplate(
        "quiet",
        _quiet_draw,
        lambda day, scale: day.observed_rain < scale.yellow_from
        and day.forecast_rain < scale.yellow_from,
    ),
    "showers": EpisodeTemplate(
        "showers",
        _showers_draw,
        lambda day, scale: scale.yellow_from <= day.observed_rain < scale.orange_from
        and scale.yellow_from <= day.forecast_rain < scale.orange_from,
    ),
    "false_alarm_cluster": EpisodeTemplate(
        "false_alarm_cluster",
        _false_alarm_draw,
        lambda day, scale: day.forecast_rain >= scale.orange_from
        and day.observed_rain < scale.yellow_from,
    ),
    "surprise_flood": EpisodeTemplate(
        "surprise_flood",
        _surprise_flood_draw,
        lambda day, scale: day.forecast_rain < scale.yellow_from
        and day.observed_rain >= scale.red_from,
    ),
    "heavy_storm": EpisodeTemplate(
        "heavy_storm",
        _heavy_storm_draw,
        lambda day, scale: day.forecast_rain >= scale.red_from
        and day.observed_rain >= scale.red_from,
    ),
}


@dataclass(frozen=True)
class GeneratorConfig:
    """Ordered episode plan for the pedagogical generator.

    ``episodes`` is a sequence of (template name, day count) pairs played
    back to back, e.g. a quiet stretch, then a cluster of false alarms,
    then a surprise flood.
    """

    episodes: tuple[tuple[str, int], ...]
    name: str = "pedagogical"
    start_date: dt.date = dt.date(2021, 3, 1)
    colour_scale: ColourScale = field(default_factory=default_colour_scale)

    def __post_init__(self) -> None:
        if not self.episodes:
            raise ConfigurationError("generator.episodes: at least one episode required")
        for template, count in self.episodes:
            if template not in TEMPLATES:
                known = ", ".join(sorted(TEMPLATES))
                raise ConfigurationError(
                    f"generator.episodes: unknown template {template!r} (known: {known})"
                )
            if count < 1:
                raise ConfigurationError(
                    f"generator.episodes: day count for {template!r} must be >= 1"
                )


def generate_pedagogical_scenario(seed: int, config: GeneratorConfig) -> Scenario:
    """Produce a deterministic teaching scenario from the episode plan.

    Every generated day satisfies its template's predicate (values are
    rounded to archive precision inside the template bounds), and the same
    seed and config always yield the identical scenario.
    """
    rng = np.random.default_rng([seed & _SEED_MASK, 0x9ED])
    scale = config.colour_scale
    days = []
    date = config.start_date
    for template_name, count in config.episodes:
        template = TEMPLATES[template_name]
        for _ in range(count):
            observed, forecast, confidence = template.draw(rng, scale)
            day = ScenarioDay(
                date=date,
                observed_rain=round(observed, 1),
                forecast_rain=round(forecast, 1),
                forecast_confidence=round(confidence, 3),
                historical_colour=None,
            )
            if not template.satisfied_by(day, scale):
                raise ScenarioError(
                    f"template {template_name!r} produced a day outside its own bounds"
                )
            days.append(day)
            date += dt.timedelta(days=1)
    return Scenario(
        name=config.name,
        days=tuple(days),
        colour_scale=scale,
        provenance="generated",
        seed=seed,
    )
