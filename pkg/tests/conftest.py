import time
from contextlib import contextmanager

import pytest

ACCEPTANCE_LINES: list[str] = []


@contextmanager
def criterion(number: int, title: str, limit_s: float):
    """Time a criterion; record PASS only if the body finishes inside limit_s."""
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < limit_s
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({elapsed:.1f} s, limit {limit_s:.0f} s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert elapsed < limit_s, line


@pytest.fixture
def accept():
    return criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
