from __future__ import annotations

import pytest

from activepu.hypothesis import Threshold, ThresholdClass
from activepu.scenario import Scenario, Uniform


def canonical(omega: float = 1.0, a: float = 0.5) -> Scenario:
    """Thresholds on uniform [0, 1] with target at ``a``."""
    return Scenario(Uniform(0, 1), ThresholdClass(), Threshold(a), omega)


@pytest.fixture
def scen():
    return canonical()


@pytest.fixture
def thresholds():
    return ThresholdClass()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
