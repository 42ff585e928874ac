"""HTTP session service over the game engine.

Sessions live in memory behind per-session locks; state views are fully
server-authoritative (phase, stats, gating) so clients never re-derive
game rules.  Views carry no session identifiers or timestamps: two
sessions created with identical inputs serialize identically.  Idle
sessions are evicted lazily whenever the registry is touched.
"""

from __future__ import annotations

import threading
import time
import uuid
import datetime as dt
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .agents import VigilanceColour
from .config import GameConfig, default_game_config, load_game_config
from .engine import GameSession
from .errors import FloodwatchError, NotFoundError, ConfigurationError
from .scenario import Scenario
from . import data as bundled_data

VIEW_SCHEMA = "floodwatch-view/1"
DEFAULT_SESSION_TTL = 2 * 60 * 60.0


@dataclass
class ContentLibrary:
    """Scenario archives and config documents discovered on disk."""

    scenarios: dict[str, Scenario] = field(default_factory=dict)
    configs: dict[str, GameConfig] = field(default_factory=dict)

    @classmethod
    def discover(cls, content_dir: Path) -> "ContentLibrary":
        library = cls()
        for path in sorted(content_dir.glob("*.scenario.json")):
            scenario = Scenario.load(path)
            library.scenarios[scenario.name] = scenario
        for path in sorted(content_dir.glob("*.config.yaml")):
            name = path.name.removesuffix(".config.yaml")
            library.configs[name] = load_game_config(path)
        return library


@dataclass
class SessionEntry:
    session: GameSession
    config_name: str | None
    created_at: str
    last_access: float
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionRegistry:
    """Thread-safe in-memory session store with idle eviction."""

    def __init__(self, ttl_seconds: float = DEFAULT_SESSION_TTL, clock=time.monotonic) -> None:
        self.ttl = ttl_seconds
        self.clock = clock
        self._entries: dict[str, SessionEntry] = {}
        self._lock = threading.Lock()

    def _evict_idle(self) -> None:
        now = self.clock()
        stale = [sid for sid, e in self._entries.items() if now - e.last_access > self.ttl]
        for sid in stale:
            del self._entries[sid]

    def add(self, session: GameSession, config_name: str | None) -> SessionEntry:
        entry = SessionEntry(
            session=session,
            config_name=config_name,
            created_at=dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
            last_access=self.clock(),
        )
        with self._lock:
            self._evict_idle()
            self._entries[session.session_id] = entry
        return entry

    def get(self, session_id: str) -> SessionEntry:
        with self._lock:
            self._evict_idle()
            entry = self._entries.get(session_id)
            if entry is None:
                raise NotFoundError(f"no such session {session_id!r}")
            entry.last_access = self.clock()
            return entry

    def __len__(self) -> int:
        with self._lock:
            self._evict_idle()
            return len(self._entries)


class CreateSessionRequest(BaseModel):
    scenario: str
    config: str | None = None
    seed: int | None = None


class AnnounceRequest(BaseModel):
    colour: str


def session_summary(entry: SessionEntry) -> dict:
    session = entry.session
    return {
        "session_id": session.session_id,
        "scenario_name": session.scenario.name,
        "config": entry.config_name,
        "created_at": entry.created_at,
        "day_index": session.day_index,
        "total_days": session.total_days,
        "phase": session.phase.value,
        "complete": session.is_complete,
    }


def state_view(session: GameSession) -> dict:
    """Everything a client needs to render the table state, nothing more."""
    day = session.current_day
    last = session.records[-1] if session.records else None
    scale = session.scale
    view = {
        "schema": VIEW_SCHEMA,
        "scenario_name": session.scenario.name,
        "phase": session.phase.value,
        "complete": session.is_complete,
        "day_index": session.day_index,
        "total_days": session.total_days,
        "weather": None
        if day is None
        else {
            "date": day.date.isoformat(),
            "forecast_rain_mm": day.forecast_rain,
            "forecast_confidence": day.forecast_confidence,
        },
        "announced_colour": None
        if session.current_colour is None
        else session.current_colour.token,
        "scale": scale.to_dict(),
        "population": {
            "size": session.population_size,
            "avg_trust": session.avg_trust,
            "evacuated_fraction": session.evacuated_fraction,
            "last_stats": None
            if session.latest_stats is None
            else session.latest_stats.to_dict(),
        },
        "communication": session.communication_stats().to_dict(),
        "last_record": None if last is None else last.to_dict(),
    }
    return view


def create_app(
    content_dir: str | Path | None = None,
    ui_dir: str | Path | None = None,
    *,
    session_ttl_seconds: float = DEFAULT_SESSION_TTL,
) -> FastAPI:
    """Build the application around a content directory of archives/configs."""
    content = Path(content_dir) if content_dir is not None else bundled_data.data_dir()
    if not content.is_dir():
        raise ConfigurationError(f"content directory {content} does not exist")
    library = ContentLibrary.discover(content)
    registry = SessionRegistry(ttl_seconds=session_ttl_seconds)
    app = FastAPI(title="floodwatch", docs_url=None, redoc_url=None)
    app.state.library = library
    app.state.registry = registry

    status_by_code = {
        "not_found": 404,
        "conflict": 409,
        "complete": 409,
        "configuration": 422,
        "ingestion": 422,
        "scenario": 422,
        "error": 400,
    }

    @app.exception_handler(FloodwatchError)
    async def handle_floodwatch_error(request: Request, exc: FloodwatchError):
        return JSONResponse(
            status_code=status_by_code.get(exc.code, 400),
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    @app.get("/api/scenarios")
    def list_scenarios():
        return {
            "scenarios": [
                {
                    "name": s.name,
                    "days": len(s),
                    "start_date": s.start_date.isoformat(),
                    "provenance": s.provenance,
                    "has_historical_colours": s.has_historical_colours,
                }
                for s in library.scenarios.values()
            ],
            "configs": sorted(library.configs),
        }

    @app.post("/api/sessions", status_code=201)
    def create_session(body: CreateSessionRequest):
        scenario = library.scenarios.get(body.scenario)
        if scenario is None:
            raise NotFoundError(f"no such scenario {body.scenario!r}")
        if body.config is not None:
            config = library.configs.get(body.config)
            if config is None:
                raise NotFoundError(f"no such config {body.config!r}")
        else:
            config = library.configs.get("default", default_game_config())
        population = config.population
        if body.seed is not None:
            from dataclasses import replace

            population = replace(population, seed=body.seed)
        session = GameSession(
            scenario,
            population,
            config.trust,
            session_id=uuid.uuid4().hex,
            event_rules=config.event_rules,
            return_after_quiet_days=config.return_after_quiet_days,
        )
        entry = registry.add(session, body.config)
        return session_summary(entry)

    @app.get("/api/sessions/{session_id}")
    def get_state(session_id: str):
        entry = registry.get(session_id)
        with entry.lock:
            return state_view(entry.session)

    @app.post("/api/sessions/{session_id}/announce")
    def announce(session_id: str, body: AnnounceRequest):
        try:
            colour = VigilanceColour.from_token(body.colour)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        entry = registry.get(session_id)
        with entry.lock:
            entry.session.announce_vigilance(colour)
            return state_view(entry.session)

    @app.post("/api/sessions/{session_id}/advance")
    def advance(session_id: str):
        entry = registry.get(session_id)
        with entry.lock:
            entry.session.advance_day()
            return state_view(entry.session)

    @app.get("/api/sessions/{session_id}/history")
    def history(session_id: str):
        entry = registry.get(session_id)
        with entry.lock:
            return entry.session.export_history().to_dict()

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
