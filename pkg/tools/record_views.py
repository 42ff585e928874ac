"""Record a scripted session against the real service for the UI tests.

Plays create -> (announce, advance) x 5 over the bundled teaching-demo
scenario, announcing red on day one (so institutional event popups fire)
and the forecast band afterwards.  Every response view is captured in
order into frontend/tests/fixtures/session_views.json so the client
snapshot tests replay genuine server output rather than hand-written
mocks.

Usage: python tools/record_views.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from floodwatch.service import create_app

OUT = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


def banded_colour(view) -> str:
    scale = view["scale"]
    forecast = view["weather"]["forecast_rain_mm"]
    if forecast >= scale["red_from_mm"]:
        return "red"
    if forecast >= scale["orange_from_mm"]:
        return "orange"
    if forecast >= scale["yellow_from_mm"]:
        return "yellow"
    return "green"


def main() -> None:
    client = TestClient(create_app())
    scenarios = client.get("/api/scenarios").json()

    created = client.post(
        "/api/sessions", json={"scenario": "teaching-demo", "seed": 5}
    )
    assert created.status_code == 201, created.text
    sid = created.json()["session_id"]
    steps = []

    view = client.get(f"/api/sessions/{sid}").json()
    steps.append({"action": "create", "view": view})

    for day in range(5):
        colour = "red" if day == 0 else banded_colour(view)
        view = client.post(
            f"/api/sessions/{sid}/announce", json={"colour": colour}
        ).json()
        steps.append({"action": "announce", "colour": colour, "view": view})
        view = client.post(f"/api/sessions/{sid}/advance").json()
        steps.append({"action": "advance", "view": view})

    OUT.mkdir(parents=True, exist_ok=True)
    payload = {
        "recorded_with": "tools/record_views.py",
        "scenario": "teaching-demo",
        "seed": 5,
        "scenarios_response": scenarios,
        "steps": steps,
    }
    path = OUT / "session_views.json"
    path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {path} ({len(steps)} steps)")


if __name__ == "__main__":
    main()
