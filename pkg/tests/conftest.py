"""Shared test plumbing: a terminal-summary channel for headline numbers.

Tests that certify quantitative bars (recall medians, baselines) append
lines through the acceptance_report fixture; the hook below echoes them
after the run so the numbers land in plain `pytest -v` output.
"""

import pytest

_REPORT_LINES: list = []


@pytest.fixture
def acceptance_report():
    return _REPORT_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _REPORT_LINES:
        terminalreporter.section("acceptance numbers")
        for line in _REPORT_LINES:
            terminalreporter.write_line(line)
