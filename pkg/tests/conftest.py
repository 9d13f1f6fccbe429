import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("lab", deadline=None, max_examples=60, derandomize=False)
settings.load_profile("lab")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=20240601))


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
