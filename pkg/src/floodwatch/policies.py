"""Announcement policies for headless play.

A policy is a callable (forecast_rain, forecast_confidence,
communication_stats) -> colour: exactly the information a human player has
when choosing what to announce.  Two policies additionally close over the
scenario being played, which is legitimate for replays (the historical
record) and for benchmarking (the truth-seeing oracle) but obviously not
available to a live announcer.
"""

from __future__ import annotations

from .agents import VigilanceColour
from .engine import CommunicationStats, PolicyFn
from .errors import ConfigurationError
from .scenario import Scenario


def always(colour: VigilanceColour) -> PolicyFn:
    """Announce the same colour every single day."""

    def policy(forecast: float, confidence: float, stats: CommunicationStats):
        return colour

    return policy


def forecast_band(scenario: Scenario) -> PolicyFn:
    """Announce the colour whose band the forecast falls in."""
    scale = scenario.colour_scale

    def policy(forecast: float, confidence: float, stats: CommunicationStats):
        return scale.colour_for(forecast)

    return policy


def historical(scenario: Scenario) -> PolicyFn:
    """Replay what was actually announced, day by day.

    Uses stats.days_played as the cursor into the scenario, so it must be
    driven through a session over that same scenario.
    """
    if not scenario.has_historical_colours:
        raise ConfigurationError(
            f"scenario {scenario.name!r} has no historical colours to replay"
        )

    def policy(forecast: float, confidence: float, stats: CommunicationStats):
        return scenario.days[stats.days_played].historical_colour

    return policy


def oracle(scenario: Scenario) -> PolicyFn:
    """Benchmark policy that sees the truth: always the deserved colour."""
    scale = scenario.colour_scale

    def policy(forecast: float, confidence: float, stats: CommunicationStats):
        return scale.colour_for(scenario.days[stats.days_played].observed_rain)

    return policy


POLICY_NAMES = (
    "forecast",
    "historical",
    "oracle",
    "always-green",
    "always-yellow",
    "always-orange",
    "always-red",
)


def build_policy(name: str, scenario: Scenario) -> PolicyFn:
    """Look up a policy by CLI name, bound to the scenario where needed."""
    if name == "forecast":
        return forecast_band(scenario)
    if name == "historical":
        return historical(scenario)
    if name == "oracle":
        return oracle(scenario)
    if name.startswith("always-"):
        try:
            return always(VigilanceColour.from_token(name.removeprefix("always-")))
        except ValueError:
            pass
    raise ConfigurationError(f"unknown policy {name!r} (known: {', '.join(POLICY_NAMES)})")
