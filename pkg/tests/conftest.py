"""Echo one line per acceptance criterion at the end of the run."""

from __future__ import annotations

_acceptance: dict[str, object] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance[report.nodeid] = report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_acceptance):
        report = _acceptance[nodeid]
        word = "PASS" if report.passed else "FAIL"
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{word}  {name}  ({report.duration:.2f}s)")
