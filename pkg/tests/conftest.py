"""Shared fixtures and the acceptance-criteria summary hook."""
from __future__ import annotations

import numpy as np
import pytest

_acceptance_lines: list[str] = []


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20250819)


@pytest.fixture
def acceptance_report():
    """Collect one pass/fail line per acceptance criterion for the summary."""

    def record(line: str) -> None:
        _acceptance_lines.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
