from __future__ import annotations

import csv
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def load_table(p: int) -> list[list[int]]:
    """Rows [d, t1*, t2*, t1, t2] transcribed from the published tables."""
    with open(FIXTURES / f"table_p{p}.csv", newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["d", "t1_star", "t2_star", "t1", "t2"]
    return [[int(x) for x in r] for r in rows[1:]]


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
