import random

import pytest

ACCEPTANCE_LINES: list[str] = []


def pytest_addoption(parser):
    parser.addoption("--pt-seed", type=int, default=20240611, help="seed for randomized property tests")


@pytest.fixture
def rng(request):
    return random.Random(request.config.getoption("--pt-seed"))


@pytest.fixture
def report():
    """Collect one pass/fail line per acceptance criterion for the summary."""
    def add(line: str) -> None:
        print(line)
        ACCEPTANCE_LINES.append(line)
    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
