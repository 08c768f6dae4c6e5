import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_runtest_logreport(report):
    if report.when not in ("setup", "call") and not (report.when == "teardown" and report.failed):
        return
    number = getattr(report, "criterion", None)
    if number is None:
        return
    entry = _criteria.setdefault(number[0], {"title": number[1], "outcomes": []})
    if report.when == "call" or report.failed or report.skipped:
        entry["outcomes"].append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        rep.criterion = (mark.args[0], mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        ok = entry["outcomes"] and all(o == "passed" for o in entry["outcomes"])
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {entry['title']}")
