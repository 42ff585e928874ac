"""Flood-vigilance communication simulator.

Play or replay alert sequences against a population of residents whose
trust in the announcer rises and falls with how well announcements match
outcomes.  See the README for the tour.
"""

from .agents import (
    COLOURS,
    Distribution,
    PopulationConfig,
    Resident,
    RiskStrategy,
    TrustParams,
    VigilanceColour,
    sample_population,
    sample_resident,
)
from .config import GameConfig, default_game_config, load_game_config, parse_game_config
from .engine import (
    AlarmClass,
    CommunicationStats,
    DayRecord,
    EventCategory,
    EventRule,
    GameSession,
    Phase,
    PopulationStats,
    SessionHistory,
    TriggeredEvent,
    classify_alarm,
    default_event_rules,
    fold_communication_stats,
    run_policy,
)
from .errors import (
    ConfigurationError,
    FloodwatchError,
    IngestionError,
    NotFoundError,
    PhaseError,
    ScenarioError,
    SessionCompleteError,
)
from .scenario import (
    ColourScale,
    GeneratorConfig,
    NoisyForecast,
    PerfectForecast,
    Scenario,
    ScenarioDay,
    build_historical_scenario,
    default_colour_scale,
    dump_rain_series,
    dump_vigilance_series,
    generate_pedagogical_scenario,
    load_rain_series,
    load_vigilance_series,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
