from __future__ import annotations

import random

import pytest

# one line per acceptance criterion, filled in by test_acceptance
CRITERIA_LINES: dict[int, str] = {}


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(CRITERIA_LINES):
            terminalreporter.write_line(CRITERIA_LINES[n])
