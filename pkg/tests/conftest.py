from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dyncov.model import NetworkConfig  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def reference_network() -> NetworkConfig:
    """λ = 1, r = 0.5, unit speed, uniform headings."""
    return NetworkConfig(1.0, 0.5)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
