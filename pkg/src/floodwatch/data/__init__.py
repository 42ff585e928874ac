"""Bundled example data: synthesized archive-format series and scenarios.

The multi-year series are generated (tools/make_fixtures.py, fixed seeds)
in the public-archive CSV format; the October 2018 episode carries the
documented Aude case values so the communication failure is replayable.
"""

from importlib import resources
from pathlib import Path


def data_path(name: str) -> Path:
    """Filesystem path of a bundled data file."""
    path = resources.files(__package__).joinpath(name)
    return Path(str(path))


def data_dir() -> Path:
    return data_path(".").resolve()
