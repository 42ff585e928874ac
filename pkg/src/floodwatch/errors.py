"""Exception types shared across the package.

Every error the library raises on purpose derives from FloodwatchError and
carries a short machine-readable ``code`` so the CLI and the HTTP service
can map failures without string matching.
"""


class FloodwatchError(Exception):
    """Base class for errors raised deliberately by this package."""

    code = "error"


class ConfigurationError(FloodwatchError):
    """A configuration document or parameter set violates its contract."""

    code = "configuration"


class IngestionError(FloodwatchError):
    """A data file failed validation; the message pinpoints file and line."""

    code = "ingestion"


class ScenarioError(FloodwatchError):
    """A scenario is internally inconsistent or cannot be assembled."""

    code = "scenario"


class PhaseError(FloodwatchError):
    """An operation was invoked in the wrong phase of the game loop."""

    code = "conflict"


class SessionCompleteError(PhaseError):
    """The scenario has been played to the end; only reads remain valid."""

    code = "complete"


class NotFoundError(FloodwatchError):
    """A named scenario, configuration, or session does not exist."""

    code = "not_found"
