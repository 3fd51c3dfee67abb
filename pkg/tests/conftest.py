import os

import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=200, deadline=None)
settings.register_profile("dev", max_examples=50, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "dev"))

_ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(name): exit criterion, reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        notes = "; ".join(str(v) for k, v in rep.user_properties if k == "note")
        _ACCEPTANCE.append((marker.args[0], "PASS" if rep.passed else "FAIL", notes))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, notes in _ACCEPTANCE:
        terminalreporter.write_line(f"[{status}] {name}" + (f"  ({notes})" if notes else ""))
