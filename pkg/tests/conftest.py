"""Shared plumbing: collect acceptance lines and repeat them in the summary."""

from __future__ import annotations

import pytest

acceptance_lines: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line for an acceptance criterion.

    Call it exactly once per test; it asserts, so a FAIL line also fails
    the test carrying it.
    """

    def record(num: int, problems: list[str], detail: str, elapsed: float) -> None:
        ok = not problems
        text = detail if ok else "; ".join(problems[:4])
        line = f"criterion {num}: {'PASS' if ok else 'FAIL'} - {text} ({elapsed:.1f}s)"
        acceptance_lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
