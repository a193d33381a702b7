"""Shared test plumbing: the acceptance-criteria summary block."""

import pytest

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance():
    """Record one pass/fail line per criterion and enforce its budget."""

    def record(num, label, ok, elapsed, budget):
        word = "PASS" if (ok and elapsed < budget) else "FAIL"
        ACCEPTANCE_LINES.append(
            f"criterion {num} [{label}]: {word} "
            f"({elapsed:.2f}s, budget {budget:g}s)")
        assert ok, f"criterion {num} ({label}) failed"
        assert elapsed < budget, (
            f"criterion {num} ({label}) over budget: "
            f"{elapsed:.2f}s >= {budget}s")

    return record
