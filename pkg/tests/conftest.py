"""Shared pytest plumbing.

Puts this directory on sys.path so tests can import the scalar reference
oracle, and prints one PASS/FAIL line per release criterion after the run
(the criterion marker is set in test_acceptance.py).
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[str, str] = {}
_outcomes: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(name): release criterion, reported after the run"
    )


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            _criteria[item.nodeid] = marker.args[0]


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    # Setup or teardown failures must flip the verdict even if the call
    # phase never ran or passed.
    if report.when == "call" or report.outcome == "failed":
        _outcomes[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, name in _criteria.items():
        verdict = "PASS" if _outcomes.get(nodeid) == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
