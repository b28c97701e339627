import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

LONG = os.environ.get("DICHROMATIC_LONG") == "1"

# criterion id -> (verdict, detail), filled by tests/test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_collection_modifyitems(config, items):
    if LONG:
        return
    skip = pytest.mark.skip(reason="long run; set DICHROMATIC_LONG=1")
    for item in items:
        if "longrun" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = f"{marker.args[0]} {marker.args[1]}"


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.skipped):
        verdict = "PASS" if report.passed else "SKIP" if report.skipped else "FAIL"
        if crit not in ACCEPTANCE or verdict != "PASS":
            ACCEPTANCE[crit] = (verdict, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE, key=lambda c: int(c.split()[0])):
        verdict, seconds = ACCEPTANCE[crit]
        terminalreporter.write_line(f"criterion {crit}: {verdict} ({seconds:.1f}s)")
