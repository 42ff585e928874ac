"""Turn-based game engine: announce a colour, reveal the day, repeat.

The session walks a scenario in strict alternation: announce_vigilance
publishes a colour and lets residents form expectations and evacuation
decisions; advance_day reveals the observed rain, updates every resident's
trust and memory, classifies the announcement, fires events, and moves to
the next day.  Population state lives in column arrays so whole-population
steps are single vector operations; the scalar Resident methods define the
reference semantics and materialized residents stay interchangeable with
the arrays.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .agents import (
    COLOURS,
    PopulationConfig,
    Resident,
    RiskStrategy,
    TrustParams,
    VigilanceColour,
    sample_population,
)
from .errors import ConfigurationError, PhaseError, ScenarioError, SessionCompleteError
from .scenario import ColourScale, Scenario

HISTORY_SCHEMA = "floodwatch-history/1"


class Phase(str, Enum):
    """Where the loop stands: waiting for a colour, or for the day to run."""

    AWAITING_COLOUR = "awaiting_colour"
    AWAITING_ADVANCE = "awaiting_advance"


class AlarmClass(str, Enum):
    """How an announcement compares with the band the rain actually hit."""

    CORRECT = "correct"
    FALSE_ALARM = "false_alarm"
    MISSED = "missed"


def classify_alarm(
    scale: ColourScale, announced: VigilanceColour, observed_rain: float
) -> AlarmClass:
    """Compare the announced colour with the colour the rain deserved."""
    deserved = scale.colour_for(observed_rain)
    if announced == deserved:
        return AlarmClass.CORRECT
    if announced > deserved:
        return AlarmClass.FALSE_ALARM
    return AlarmClass.MISSED


class EventCategory(str, Enum):
    INSTITUTIONAL = "institutional"
    DAMAGE = "damage"


@dataclass(frozen=True)
class EventRule:
    """Data-driven event trigger; all configured conditions must hold."""

    event_id: str
    category: EventCategory
    message: str
    min_announced: VigilanceColour | None = None
    min_observed: float | None = None

    def __post_init__(self) -> None:
        if self.min_announced is None and self.min_observed is None:
            raise ConfigurationError(f"event {self.event_id!r}: needs at least one condition")

    def fires(self, announced: VigilanceColour, observed_rain: float) -> bool:
        if self.min_announced is not None and announced < self.min_announced:
            return False
        if self.min_observed is not None and observed_rain < self.min_observed:
            return False
        return True


@dataclass(frozen=True)
class TriggeredEvent:
    """An event that fired on a given day, ready for display."""

    event_id: str
    category: EventCategory
    message: str
    date: dt.date

    def to_dict(self) -> dict:
        return {
            "id": self.event_id,
            "category": self.category.value,
            "message": self.message,
            "date": self.date.isoformat(),
        }


def default_event_rules(scale: ColourScale) -> list[EventRule]:
    """Institutional reactions to strong alerts, damage at extreme rainfall."""
    return [
        EventRule(
            "schools_closed",
            EventCategory.INSTITUTIONAL,
            "Schools are closed for the day.",
            min_announced=VigilanceColour.ORANGE,
        ),
        EventRule(
            "school_buses_stopped",
            EventCategory.INSTITUTIONAL,
            "School bus service is suspended.",
            min_announced=VigilanceColour.ORANGE,
        ),
        EventRule(
            "roads_flooded",
            EventCategory.DAMAGE,
            "Low-lying roads are under water.",
            min_observed=scale.red_from,
        ),
        EventRule(
            "bridge_collapsed",
            EventCategory.DAMAGE,
            "A road bridge has collapsed under the flood.",
            min_observed=scale.red_from * 2.0,
        ),
    ]


@dataclass(frozen=True)
class PopulationStats:
    """Aggregate population snapshot taken by the engine.

    ``unaware_fraction`` is the share of residents whose blended
    expectation falls short of the day's observed rain, i.e. people the
    communication failed to prepare.  ``trust_delta`` compares average
    trust with the previous snapshot.
    """

    avg_trust: float
    trust_delta: float
    avg_expected_rain: float
    unaware_fraction: float
    evacuated_fraction: float
    per_colour_avg_subjective_risk: dict[VigilanceColour, float]

    def to_dict(self) -> dict:
        return {
            "avg_trust": self.avg_trust,
            "trust_delta": self.trust_delta,
            "avg_expected_rain_mm": self.avg_expected_rain,
            "unaware_fraction": self.unaware_fraction,
            "evacuated_fraction": self.evacuated_fraction,
            "per_colour_avg_subjective_risk_mm": {
                c.token: self.per_colour_avg_subjective_risk[c] for c in COLOURS
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PopulationStats":
        per_colour = data["per_colour_avg_subjective_risk_mm"]
        return cls(
            avg_trust=data["avg_trust"],
            trust_delta=data["trust_delta"],
            avg_expected_rain=data["avg_expected_rain_mm"],
            unaware_fraction=data["unaware_fraction"],
            evacuated_fraction=data["evacuated_fraction"],
            per_colour_avg_subjective_risk={
                c: per_colour[c.token] for c in COLOURS
            },
        )


@dataclass(frozen=True)
class CommunicationStats:
    """Scoreboard of the announcer's record so far."""

    days_played: int
    days_announced: dict[VigilanceColour, int]
    false_alarms: dict[VigilanceColour, int]
    missed_alarms: dict[VigilanceColour, int]

    def to_dict(self) -> dict:
        return {
            "days_played": self.days_played,
            "per_colour": {
                c.token: {
                    "days_announced": self.days_announced[c],
                    "false_alarms": self.false_alarms[c],
                    "missed_alarms": self.missed_alarms[c],
                }
                for c in COLOURS
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CommunicationStats":
        per = data["per_colour"]
        return cls(
            days_played=data["days_played"],
            days_announced={c: per[c.token]["days_announced"] for c in COLOURS},
            false_alarms={c: per[c.token]["false_alarms"] for c in COLOURS},
            missed_alarms={c: per[c.token]["missed_alarms"] for c in COLOURS},
        )


@dataclass(frozen=True)
class DayRecord:
    """Everything one played day produced, in play order."""

    date: dt.date
    forecast_rain: float
    forecast_confidence: float
    announced_colour: VigilanceColour
    observed_rain: float
    classification: AlarmClass
    post_alert_stats: PopulationStats
    post_observation_stats: PopulationStats
    events: tuple[TriggeredEvent, ...] = ()

    def to_dict(self) -> dict:
        return {
            "date": self.date.isoformat(),
            "forecast_rain_mm": self.forecast_rain,
            "forecast_confidence": self.forecast_confidence,
            "announced_colour": self.announced_colour.token,
            "observed_rain_mm": self.observed_rain,
            "classification": self.classification.value,
            "post_alert_stats": self.post_alert_stats.to_dict(),
            "post_observation_stats": self.post_observation_stats.to_dict(),
            "events": [event.to_dict() for event in self.events],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DayRecord":
        return cls(
            date=dt.date.fromisoformat(data["date"]),
            forecast_rain=data["forecast_rain_mm"],
            forecast_confidence=data["forecast_confidence"],
            announced_colour=VigilanceColour.from_token(data["announced_colour"]),
            observed_rain=data["observed_rain_mm"],
            classification=AlarmClass(data["classification"]),
            post_alert_stats=PopulationStats.from_dict(data["post_alert_stats"]),
            post_observation_stats=PopulationStats.from_dict(data["post_observation_stats"]),
            events=tuple(
                TriggeredEvent(
                    event_id=event["id"],
                    category=EventCategory(event["category"]),
                    message=event["message"],
                    date=dt.date.fromisoformat(event["date"]),
                )
                for event in data.get("events", ())
            ),
        )


@dataclass
class SessionHistory:
    """Exportable record of a full or partial playthrough.

    Serialization is canonical (sorted keys, fixed separators, no
    timestamps), so two sessions with identical inputs export
    byte-identical documents.
    """

    scenario_name: str
    population_seed: int
    policy: str | None
    scale: ColourScale
    records: list[DayRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema": HISTORY_SCHEMA,
            "scenario_name": self.scenario_name,
            "population_seed": self.population_seed,
            "policy": self.policy,
            "scale": self.scale.to_dict(),
            "records": [record.to_dict() for record in self.records],
        }

    def dump_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "SessionHistory":
        if data.get("schema") != HISTORY_SCHEMA:
            raise ScenarioError(
                f"unsupported history schema {data.get('schema')!r}; expected {HISTORY_SCHEMA}"
            )
        return cls(
            scenario_name=data["scenario_name"],
            population_seed=data["population_seed"],
            policy=data["policy"],
            scale=ColourScale.from_dict(data["scale"]),
            records=[DayRecord.from_dict(record) for record in data["records"]],
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dump_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "SessionHistory":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: not valid JSON ({exc})") from None
        return cls.from_dict(data)


class PopulationArrays:
    """Column-oriented resident state for whole-population vector steps.

    Per-colour memories are ring buffers of shape (n, colours, max_depth);
    slot j of a ring is valid while j < count.  ``write_at`` is the next
    slot to overwrite, so the newest entry sits at write_at - 1 and rings
    unroll to chronological order from write_at when full.
    """

    def __init__(self, residents: Sequence[Resident]) -> None:
        n = len(residents)
        if n == 0:
            raise ConfigurationError("population must not be empty")
        self.size = n
        self.trust = np.array([r.trust for r in residents], dtype=np.float64)
        self.threshold = np.array(
            [r.risk_aversion_threshold for r in residents], dtype=np.float64
        )
        self.depth = np.array([r.memory_depth for r in residents], dtype=np.int64)
        self.strategy = np.array([int(r.strategy) for r in residents], dtype=np.int64)
        self.evacuated = np.array([r.evacuated for r in residents], dtype=bool)
        self.last_expected = np.full(n, np.nan, dtype=np.float64)
        for i, r in enumerate(residents):
            if r.last_expected_rain is not None:
                self.last_expected[i] = r.last_expected_rain
        dmax = int(self.depth.max())
        self.memory = np.zeros((n, len(COLOURS), dmax), dtype=np.float64)
        self.mem_count = np.zeros((n, len(COLOURS)), dtype=np.int64)
        self.write_at = np.zeros((n, len(COLOURS)), dtype=np.int64)
        for i, r in enumerate(residents):
            for colour in COLOURS:
                events = list(r.memory[colour])
                if events:
                    self.memory[i, colour, : len(events)] = events
                    self.mem_count[i, colour] = len(events)
                    self.write_at[i, colour] = len(events) % r.memory_depth
        self._row_index = np.arange(n)
        self._slot_index = np.arange(dmax)

    def subjective_by_colour(self, colour: VigilanceColour, fallback: float) -> np.ndarray:
        """Per-resident subjective risk for one colour (fallback when empty)."""
        c = int(colour)
        values = self.memory[:, c, :]
        count = self.mem_count[:, c]
        valid = self._slot_index[None, :] < count[:, None]
        mins = np.where(valid, values, np.inf).min(axis=1)
        maxs = np.where(valid, values, -np.inf).max(axis=1)
        # Clamp like the scalar reference: sum/len may drift one ulp
        # outside [min, max] and the strategy ordering must stay exact.
        means = np.where(valid, values, 0.0).sum(axis=1) / np.maximum(count, 1)
        means = np.minimum(np.maximum(means, mins), maxs)
        newest = values[self._row_index, (self.write_at[:, c] - 1) % self.depth]
        subjective = np.select(
            [
                self.strategy == int(RiskStrategy.OPTIMISTIC),
                self.strategy == int(RiskStrategy.PESSIMISTIC),
                self.strategy == int(RiskStrategy.RATIONAL),
            ],
            [mins, maxs, means],
            default=newest,
        )
        return np.where(count > 0, subjective, fallback)

    def form_expectations(self, subjective: np.ndarray, official_risk: float) -> np.ndarray:
        expected = self.trust * official_risk + (1.0 - self.trust) * subjective
        self.last_expected = expected
        return expected

    def apply_alert_evacuations(self) -> None:
        self.evacuated |= self.last_expected >= self.threshold

    def apply_late_evacuations(self, observed_rain: float) -> None:
        # Rising water overrides any earlier decision to stay.
        self.evacuated |= observed_rain >= self.threshold

    def return_everyone_home(self) -> None:
        self.evacuated[:] = False

    def update_trust(self, observed_rain: float, params: TrustParams) -> None:
        deviation = observed_rain - self.last_expected
        excess = np.abs(deviation) - params.surprise_tolerance
        rate = np.where(deviation > 0.0, params.loss_missed_rate, params.loss_false_alarm_rate)
        raised = np.minimum(1.0, self.trust + params.gain_slight)
        lowered = np.maximum(0.0, self.trust - rate * excess / params.severity_scale)
        self.trust = np.where(excess <= 0.0, raised, lowered)

    def append_observation(self, colour: VigilanceColour, observed_rain: float) -> None:
        c = int(colour)
        slot = self.write_at[:, c]
        self.memory[self._row_index, c, slot] = observed_rain
        self.write_at[:, c] = (slot + 1) % self.depth
        np.minimum(self.mem_count[:, c] + 1, self.depth, out=self.mem_count[:, c])

    def to_residents(self) -> list[Resident]:
        """Materialize plain residents (memories in chronological order)."""
        residents = []
        for i in range(self.size):
            depth = int(self.depth[i])
            memory = {}
            for colour in COLOURS:
                count = int(self.mem_count[i, colour])
                ring = self.memory[i, colour, :depth]
                if count < depth:
                    events = list(ring[:count])
                else:
                    at = int(self.write_at[i, colour])
                    events = list(ring[at:]) + list(ring[:at])
                memory[colour] = [float(v) for v in events]
            expected = self.last_expected[i]
            residents.append(
                Resident(
                    resident_id=i,
                    trust=float(self.trust[i]),
                    risk_aversion_threshold=float(self.threshold[i]),
                    memory_depth=depth,
                    strategy=RiskStrategy(int(self.strategy[i])),
                    memory=memory,
                    evacuated=bool(self.evacuated[i]),
                    last_expected_rain=None if np.isnan(expected) else float(expected),
                )
            )
        return residents


PolicyFn = Callable[[float, float, CommunicationStats], VigilanceColour]


class GameSession:
    """One playthrough of a scenario by one population.

    The loop alternates strictly: announce_vigilance while AWAITING_COLOUR,
    advance_day while AWAITING_ADVANCE, exactly once per scenario day.
    Calling either out of turn raises PhaseError; once every day is played
    the session is complete and both raise SessionCompleteError.
    """

    def __init__(
        self,
        scenario: Scenario,
        population: PopulationConfig | Sequence[Resident],
        trust_params: TrustParams = TrustParams(),
        *,
        session_id: str = "local",
        event_rules: Sequence[EventRule] | None = None,
        return_after_quiet_days: int = 2,
    ) -> None:
        if return_after_quiet_days < 1:
            raise ConfigurationError("return_after_quiet_days: must be >= 1")
        self.session_id = session_id
        self.scenario = scenario
        self.scale = scenario.colour_scale
        self.trust_params = trust_params
        if isinstance(population, PopulationConfig):
            self.population_config: PopulationConfig | None = population
            residents = sample_population(population)
        else:
            self.population_config = None
            residents = list(population)
        self._pop = PopulationArrays(residents)
        self.event_rules = (
            list(event_rules) if event_rules is not None else default_event_rules(self.scale)
        )
        self.return_after_quiet_days = return_after_quiet_days
        self.phase = Phase.AWAITING_COLOUR
        self.day_index = 0
        self.current_colour: VigilanceColour | None = None
        self.records: list[DayRecord] = []
        self._pending_alert_stats: PopulationStats | None = None
        self._quiet_streak = 0
        self._previous_avg_trust = float(self._pop.trust.mean())
        self._days_announced = {c: 0 for c in COLOURS}
        self._false_alarms = {c: 0 for c in COLOURS}
        self._missed_alarms = {c: 0 for c in COLOURS}
        # Per-colour subjective aggregates depend only on memory, which one
        # advance touches for one colour; cache and invalidate surgically.
        self._subjective_cache: dict[VigilanceColour, np.ndarray] = {}

    # -- read-only views ---------------------------------------------------

    @property
    def total_days(self) -> int:
        return len(self.scenario)

    @property
    def is_complete(self) -> bool:
        return self.day_index >= self.total_days

    @property
    def current_day(self):
        return None if self.is_complete else self.scenario.days[self.day_index]

    @property
    def population_size(self) -> int:
        return self._pop.size

    @property
    def avg_trust(self) -> float:
        return float(self._pop.trust.mean())

    @property
    def evacuated_fraction(self) -> float:
        return float(self._pop.evacuated.mean())

    def residents(self) -> list[Resident]:
        return self._pop.to_residents()

    @property
    def latest_stats(self) -> PopulationStats | None:
        """Most recent population snapshot, or None before the first announce."""
        if self.phase is Phase.AWAITING_ADVANCE:
            return self._pending_alert_stats
        if self.records:
            return self.records[-1].post_observation_stats
        return None

    # -- the loop ----------------------------------------------------------

    def announce_vigilance(self, colour: VigilanceColour) -> PopulationStats:
        """Publish the day's colour; residents react before the rain falls.

        Every resident forms a blended expectation (evacuees keep following
        the weather from wherever they are), and residents still home
        evacuate when that expectation reaches their threshold.
        """
        self._require(Phase.AWAITING_COLOUR)
        colour = VigilanceColour(colour)
        subjective = self._subjective(colour)
        self._pop.form_expectations(subjective, self.scale.official_risk(colour))
        self._pop.apply_alert_evacuations()
        self.current_colour = colour
        self.phase = Phase.AWAITING_ADVANCE
        return self._snapshot()

    def advance_day(self) -> DayRecord:
        """Reveal the day: update trust and memory, classify, fire events."""
        self._require(Phase.AWAITING_ADVANCE)
        day = self.scenario.days[self.day_index]
        colour = self.current_colour
        assert colour is not None
        observed = day.observed_rain
        self._pop.update_trust(observed, self.trust_params)
        self._pop.append_observation(colour, observed)
        self._subjective_cache.pop(colour, None)
        self._pop.apply_late_evacuations(observed)
        classification = classify_alarm(self.scale, colour, observed)
        events = tuple(
            TriggeredEvent(rule.event_id, rule.category, rule.message, day.date)
            for rule in self.event_rules
            if rule.fires(colour, observed)
        )
        assert self._pending_alert_stats is not None
        record = DayRecord(
            date=day.date,
            forecast_rain=day.forecast_rain,
            forecast_confidence=day.forecast_confidence,
            announced_colour=colour,
            observed_rain=observed,
            classification=classification,
            post_alert_stats=self._pending_alert_stats,
            post_observation_stats=self._snapshot(observed_rain=observed),
            events=events,
        )
        self.records.append(record)
        self._days_announced[colour] += 1
        if classification is AlarmClass.FALSE_ALARM:
            self._false_alarms[colour] += 1
        elif classification is AlarmClass.MISSED:
            self._missed_alarms[colour] += 1
        # End-of-day transition: a long enough quiet stretch sends evacuees
        # home, after the day's stats were taken.
        if self.scale.colour_for(observed) is VigilanceColour.GREEN:
            self._quiet_streak += 1
        else:
            self._quiet_streak = 0
        if self._quiet_streak >= self.return_after_quiet_days:
            self._pop.return_everyone_home()
        self.day_index += 1
        self.phase = Phase.AWAITING_COLOUR
        self.current_colour = None
        return record

    def communication_stats(self) -> CommunicationStats:
        return CommunicationStats(
            days_played=len(self.records),
            days_announced=dict(self._days_announced),
            false_alarms=dict(self._false_alarms),
            missed_alarms=dict(self._missed_alarms),
        )

    def export_history(self, policy: str | None = None) -> SessionHistory:
        seed = self.population_config.seed if self.population_config else 0
        return SessionHistory(
            scenario_name=self.scenario.name,
            population_seed=seed,
            policy=policy,
            scale=self.scale,
            records=list(self.records),
        )

    # -- internals ---------------------------------------------------------

    def _require(self, phase: Phase) -> None:
        if self.is_complete:
            raise SessionCompleteError(
                f"scenario {self.scenario.name!r} is complete after {self.total_days} days"
            )
        if self.phase is not phase:
            expected = "announce_vigilance" if self.phase is Phase.AWAITING_COLOUR else "advance_day"
            raise PhaseError(f"wrong phase: the session is waiting for {expected}")

    def _subjective(self, colour: VigilanceColour) -> np.ndarray:
        cached = self._subjective_cache.get(colour)
        if cached is None:
            cached = self._pop.subjective_by_colour(colour, self.scale.official_risk(colour))
            self._subjective_cache[colour] = cached
        return cached

    def _snapshot(self, observed_rain: float | None = None) -> PopulationStats:
        """Aggregate the population; also feeds the announce return value."""
        pop = self._pop
        avg_trust = float(pop.trust.mean())
        delta = avg_trust - self._previous_avg_trust
        self._previous_avg_trust = avg_trust
        if observed_rain is None:
            reference = self.scenario.days[self.day_index].observed_rain
        else:
            reference = observed_rain
        stats = PopulationStats(
            avg_trust=avg_trust,
            trust_delta=delta,
            avg_expected_rain=float(pop.last_expected.mean()),
            unaware_fraction=float((pop.last_expected < reference).mean()),
            evacuated_fraction=float(pop.evacuated.mean()),
            per_colour_avg_subjective_risk={
                c: float(self._subjective(c).mean()) for c in COLOURS
            },
        )
        if observed_rain is None:
            self._pending_alert_stats = stats
        return stats


def fold_communication_stats(records: Iterable[DayRecord]) -> CommunicationStats:
    """Rebuild the announcer scoreboard from day records."""
    days_announced = {c: 0 for c in COLOURS}
    false_alarms = {c: 0 for c in COLOURS}
    missed_alarms = {c: 0 for c in COLOURS}
    played = 0
    for record in records:
        played += 1
        days_announced[record.announced_colour] += 1
        if record.classification is AlarmClass.FALSE_ALARM:
            false_alarms[record.announced_colour] += 1
        elif record.classification is AlarmClass.MISSED:
            missed_alarms[record.announced_colour] += 1
    return CommunicationStats(
        days_played=played,
        days_announced=days_announced,
        false_alarms=false_alarms,
        missed_alarms=missed_alarms,
    )


def run_policy(
    scenario: Scenario,
    population: PopulationConfig | Sequence[Resident],
    trust_params: TrustParams,
    policy: PolicyFn,
    *,
    policy_name: str | None = None,
    event_rules: Sequence[EventRule] | None = None,
    return_after_quiet_days: int = 2,
) -> SessionHistory:
    """Play a whole scenario headlessly under ``policy`` and export it.

    The policy sees what a human player would before choosing: the day's
    forecast, its confidence, and the running communication scoreboard.
    """
    session = GameSession(
        scenario,
        population,
        trust_params,
        event_rules=event_rules,
        return_after_quiet_days=return_after_quiet_days,
    )
    while not session.is_complete:
        day = session.current_day
        colour = policy(day.forecast_rain, day.forecast_confidence, session.communication_stats())
        session.announce_vigilance(colour)
        session.advance_day()
    return session.export_history(policy=policy_name)
