"""Collects acceptance-criterion outcomes and prints one line per criterion."""

import pytest

_outcomes: dict[int, dict] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    entry = _outcomes.setdefault(number, {"title": title, "ok": True, "ran": False})
    if call.excinfo is not None and call.excinfo.errisinstance(pytest.skip.Exception):
        return
    if call.when == "call":
        entry["ran"] = True
    if call.excinfo is not None:
        entry["ran"] = True
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        entry = _outcomes[number]
        if not entry["ran"]:
            status = "NOT RUN"
        else:
            status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {entry['title']}")
