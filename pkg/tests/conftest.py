"""Shared fixtures and hypothesis profiles."""
import os
from datetime import timedelta

import pytest
from hypothesis import settings

from hallmhd import spectral as sp

# spectral fields make individual examples slow; no per-example deadline
settings.register_profile("default", deadline=None, max_examples=50)
settings.register_profile("ci", deadline=timedelta(seconds=5), max_examples=200)
settings.register_profile("dev", deadline=None, max_examples=10)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def g16():
    return sp.Grid3(16)


@pytest.fixture(scope="session")
def g32():
    return sp.Grid3(32)


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record an acceptance outcome; lines are echoed in the terminal summary."""
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for outcome in sorted(_ACCEPTANCE_LINES, key=lambda o: int(o.name[1:])):
        for line in outcome.lines():
            terminalreporter.write_line(line)
