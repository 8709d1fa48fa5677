"""Shared fixtures and the acceptance-suite terminal report."""

from __future__ import annotations

import pytest

from relcalc import BetaParams, Component, Series


@pytest.fixture
def series3():
    """Three-component series used throughout the demo scenarios."""
    return Series(Component("s1"), Component("s2"), Component("s3"))


@pytest.fixture
def series3_priors():
    return {
        "s1": BetaParams(5, 2),
        "s2": BetaParams(3, 2),
        "s3": BetaParams(2, 2),
    }


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of a run."""
    rows = []
    for status, flag in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if nodeid.startswith("tests/test_acceptance.py::") and getattr(report, "when", "call") == "call":
                rows.append((nodeid.split("::")[-1], flag))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, flag in sorted(rows):
            terminalreporter.write_line(f"{flag}  {name}")
