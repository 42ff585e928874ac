"""Resident agents and the rules that drive their reactions to alerts.

A resident remembers how much rain actually fell on days a given vigilance
colour was announced, condenses that memory into a subjective risk figure
according to their personality, and blends it with the official risk
message weighted by how much they currently trust the authority.  Trust
itself moves asymmetrically: it creeps up when announcements match
outcomes and drops sharply when they do not, with under-announced events
costing more than false alarms.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .errors import ConfigurationError

# numpy seed entropy must be non-negative; negative user seeds are masked.
_SEED_MASK = (1 << 63) - 1


class VigilanceColour(IntEnum):
    """Official four-level alert scale, ordered from calm to alarming."""

    GREEN = 0
    YELLOW = 1
    ORANGE = 2
    RED = 3

    @property
    def token(self) -> str:
        return self.name.lower()

    @classmethod
    def from_token(cls, token: str) -> "VigilanceColour":
        try:
            return cls[token.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown vigilance colour {token!r}") from None


COLOURS = tuple(VigilanceColour)


class RiskStrategy(IntEnum):
    """How a resident condenses remembered rain into a single estimate.

    OPTIMISTIC keeps the mildest remembered outcome, PESSIMISTIC the worst,
    RATIONAL averages everything remembered, SHORT_MEMORY only recalls the
    most recent event.
    """

    OPTIMISTIC = 0
    PESSIMISTIC = 1
    RATIONAL = 2
    SHORT_MEMORY = 3

    @property
    def token(self) -> str:
        return self.name.lower()

    @classmethod
    def from_token(cls, token: str) -> "RiskStrategy":
        try:
            return cls[token.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown risk strategy {token!r}") from None


STRATEGIES = tuple(RiskStrategy)


@dataclass(frozen=True)
class TrustParams:
    """Parameters of the asymmetric trust update.

    A day landing within ``surprise_tolerance`` millimetres of the
    resident's expectation nudges trust up by ``gain_slight``.  A surprise
    beyond the tolerance costs trust proportionally to how far outside the
    band it fell, divided by ``severity_scale`` millimetres; the rate for
    under-announced events must exceed the rate for false alarms, so trust
    builds slowly and collapses quickly.
    """

    gain_slight: float = 0.02
    loss_false_alarm_rate: float = 0.15
    loss_missed_rate: float = 0.40
    surprise_tolerance: float = 10.0
    severity_scale: float = 100.0

    def __post_init__(self) -> None:
        if not 0.0 < self.gain_slight <= 0.05:
            raise ConfigurationError("trust.gain_slight: must be in (0, 0.05]")
        if self.loss_false_alarm_rate <= 0.0:
            raise ConfigurationError("trust.loss_false_alarm_rate: must be > 0")
        if self.loss_missed_rate <= self.loss_false_alarm_rate:
            raise ConfigurationError(
                "trust.loss_missed_rate: must exceed loss_false_alarm_rate; "
                "a flood nobody warned about hurts more than a quiet alert day"
            )
        if self.surprise_tolerance < 0.0:
            raise ConfigurationError("trust.surprise_tolerance: must be >= 0")
        if self.severity_scale <= 0.0:
            raise ConfigurationError("trust.severity_scale: must be > 0")


@dataclass(frozen=True)
class Distribution:
    """Sampling spec for one resident attribute: a constant or a range.

    ``high`` is None for constants.  Uniform ranges are inclusive of both
    ends for integer attributes and half-open for floats, matching the
    underlying generator calls.
    """

    low: float
    high: float | None = None

    @classmethod
    def constant(cls, value: float) -> "Distribution":
        return cls(float(value))

    @classmethod
    def uniform(cls, low: float, high: float) -> "Distribution":
        if high < low:
            raise ConfigurationError(f"uniform bounds reversed: [{low}, {high}]")
        return cls(float(low), float(high))

    @property
    def bounds(self) -> tuple[float, float]:
        return (self.low, self.low if self.high is None else self.high)

    def sample(self, rng: np.random.Generator) -> float:
        if self.high is None:
            return self.low
        return float(rng.uniform(self.low, self.high))

    def sample_int(self, rng: np.random.Generator) -> int:
        lo, hi = self.bounds
        if lo != int(lo) or hi != int(hi):
            raise ConfigurationError(f"integer attribute needs integer bounds, got [{lo}, {hi}]")
        if self.high is None:
            return int(lo)
        return int(rng.integers(int(lo), int(hi) + 1))

    @classmethod
    def from_spec(cls, spec: object, path: str = "distribution") -> "Distribution":
        """Parse ``{"constant": x}``, ``{"uniform": [lo, hi]}``, or a bare number."""
        if isinstance(spec, (int, float)) and not isinstance(spec, bool):
            return cls.constant(float(spec))
        if isinstance(spec, dict):
            if set(spec) == {"constant"}:
                value = spec["constant"]
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise ConfigurationError(f"{path}.constant: expected a number")
                return cls.constant(float(value))
            if set(spec) == {"uniform"}:
                pair = spec["uniform"]
                if (
                    not isinstance(pair, (list, tuple))
                    or len(pair) != 2
                    or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in pair)
                ):
                    raise ConfigurationError(f"{path}.uniform: expected [low, high]")
                try:
                    return cls.uniform(float(pair[0]), float(pair[1]))
                except ConfigurationError as exc:
                    raise ConfigurationError(f"{path}.uniform: {exc}") from None
        raise ConfigurationError(
            f"{path}: expected a number, {{constant: x}} or {{uniform: [low, high]}}"
        )


@dataclass(frozen=True)
class PopulationConfig:
    """Recipe for a synthetic population.

    ``strategy_weights`` follows the order of RiskStrategy (optimistic,
    pessimistic, rational, short_memory) and must sum to 1.  ``seed`` fixes
    every draw: resident ``i`` always samples from a generator keyed by
    (seed, i), so changing the population size never reshuffles existing
    residents.
    """

    size: int
    trust_init: Distribution = Distribution.uniform(0.4, 0.9)
    risk_aversion_threshold: Distribution = Distribution.uniform(25.0, 90.0)
    memory_depth: Distribution = Distribution.uniform(2, 6)
    strategy_weights: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ConfigurationError("population.size: must be >= 1")
        lo, hi = self.trust_init.bounds
        if lo < 0.0 or hi > 1.0:
            raise ConfigurationError("population.trust_init: bounds must lie in [0, 1]")
        lo, hi = self.risk_aversion_threshold.bounds
        if lo <= 0.0:
            raise ConfigurationError("population.risk_aversion_threshold: must be > 0")
        lo, hi = self.memory_depth.bounds
        if lo < 1 or lo != int(lo) or hi != int(hi):
            raise ConfigurationError("population.memory_depth: integer bounds >= 1 required")
        if len(self.strategy_weights) != len(STRATEGIES):
            raise ConfigurationError("population.strategy_weights: need one weight per strategy")
        if any(w < 0.0 for w in self.strategy_weights):
            raise ConfigurationError("population.strategy_weights: weights must be >= 0")
        if abs(sum(self.strategy_weights) - 1.0) > 1e-9:
            raise ConfigurationError("population.strategy_weights: weights must sum to 1")


@dataclass
class Resident:
    """One inhabitant with memory, trust, and an evacuation threshold.

    ``memory`` keeps, per vigilance colour, the observed rainfall of the
    most recent days that colour was announced, bounded by
    ``memory_depth`` (oldest entries fall out first).
    """

    resident_id: int
    trust: float
    risk_aversion_threshold: float
    memory_depth: int
    strategy: RiskStrategy
    memory: dict[VigilanceColour, deque[float]] = field(default=None)  # type: ignore[assignment]
    evacuated: bool = False
    last_expected_rain: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.trust <= 1.0:
            raise ConfigurationError("resident trust must lie in [0, 1]")
        if self.risk_aversion_threshold <= 0.0:
            raise ConfigurationError("resident risk_aversion_threshold must be > 0")
        if self.memory_depth < 1:
            raise ConfigurationError("resident memory_depth must be >= 1")
        if self.memory is None:
            self.memory = {c: deque(maxlen=self.memory_depth) for c in COLOURS}
        else:
            # Coerce user-supplied sequences; deque keeps the newest entries.
            self.memory = {
                c: deque(self.memory.get(c, ()), maxlen=self.memory_depth) for c in COLOURS
            }

    def subjective_risk(self, colour: VigilanceColour, fallback: float) -> float:
        """Condense remembered rain for ``colour`` per strategy, else ``fallback``."""
        if fallback < 0.0:
            raise ValueError("fallback risk must be >= 0")
        events = self.memory[colour]
        if not events:
            return float(fallback)
        if self.strategy is RiskStrategy.OPTIMISTIC:
            return min(events)
        if self.strategy is RiskStrategy.PESSIMISTIC:
            return max(events)
        if self.strategy is RiskStrategy.RATIONAL:
            # Rounding can push sum/len a hair outside the observed range;
            # clamp so the optimistic <= rational <= pessimistic ordering
            # holds exactly.
            return min(max(sum(events) / len(events), min(events)), max(events))
        return events[-1]

    def form_expectation(
        self,
        colour: VigilanceColour,
        official_risk: float,
        fallback: float | None = None,
    ) -> float:
        """Blend the official risk with subjective memory, weighted by trust.

        Stores the result as ``last_expected_rain`` so the next trust update
        has a reference point.  ``fallback`` defaults to the official risk,
        which is what a resident with no memory of the colour goes by.
        """
        if official_risk < 0.0:
            raise ValueError("official risk must be >= 0")
        if fallback is None:
            fallback = official_risk
        subjective = self.subjective_risk(colour, fallback)
        expected = self.trust * official_risk + (1.0 - self.trust) * subjective
        self.last_expected_rain = expected
        return expected

    def update_trust(self, observed_rain: float, params: TrustParams) -> float:
        """Move trust after the day's rain is revealed.

        Requires a prior form_expectation call for the day.  The deviation
        sign picks the loss rate: positive (more rain than expected) is the
        missed-event side, negative the false-alarm side.
        """
        if self.last_expected_rain is None:
            raise ValueError("no expectation formed before observing rain")
        deviation = observed_rain - self.last_expected_rain
        excess = abs(deviation) - params.surprise_tolerance
        if excess <= 0.0:
            self.trust = min(1.0, self.trust + params.gain_slight)
        else:
            rate = params.loss_missed_rate if deviation > 0.0 else params.loss_false_alarm_rate
            self.trust = max(0.0, self.trust - rate * excess / params.severity_scale)
        return self.trust

    def record_observation(self, colour: VigilanceColour, observed_rain: float) -> None:
        if observed_rain < 0.0:
            raise ValueError("observed rain must be >= 0")
        self.memory[colour].append(float(observed_rain))

    def decide_evacuation(self, expected_rain: float) -> bool:
        """Evacuate when the expected rain reaches the personal threshold.

        Absorbing: once evacuated the resident stays away until the game
        loop sends them home after a quiet stretch.
        """
        if not self.evacuated and expected_rain >= self.risk_aversion_threshold:
            self.evacuated = True
        return self.evacuated


def sample_resident(config: PopulationConfig, index: int) -> Resident:
    """Draw resident ``index`` of the configured population.

    Draw order is fixed (trust, threshold, memory depth, strategy) and each
    resident has an independent generator, so populations are reproducible
    attribute by attribute.
    """
    if not 0 <= index < config.size:
        raise ValueError(f"resident index {index} outside population of {config.size}")
    rng = np.random.default_rng([config.seed & _SEED_MASK, index])
    trust = config.trust_init.sample(rng)
    threshold = config.risk_aversion_threshold.sample(rng)
    depth = config.memory_depth.sample_int(rng)
    strategy = STRATEGIES[int(rng.choice(len(STRATEGIES), p=config.strategy_weights))]
    return Resident(
        resident_id=index,
        trust=trust,
        risk_aversion_threshold=threshold,
        memory_depth=depth,
        strategy=strategy,
    )


def sample_population(config: PopulationConfig) -> list[Resident]:
    return [sample_resident(config, i) for i in range(config.size)]
