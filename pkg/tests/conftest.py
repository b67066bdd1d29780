"""Prints one PASS/FAIL line per acceptance test at the end of a run."""

import pytest

_ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or "test_acceptance" not in str(item.fspath):
        return
    name = item.name
    if report.passed:
        _ACCEPTANCE_RESULTS[name] = "PASS"
    elif report.failed:
        _ACCEPTANCE_RESULTS[name] = "FAIL"
    elif report.skipped and hasattr(report, "wasxfail"):
        _ACCEPTANCE_RESULTS[name] = "FAIL (known, documented)"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in _ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"  {verdict:<24} {name}")
