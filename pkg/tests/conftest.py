import pytest
from hypothesis import settings, strategies as st

from sumdiff.intset import IntSet

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def small_sets(lo=-30, hi=30, min_size=0, max_size=10):
    return st.lists(st.integers(lo, hi), min_size=min_size, max_size=max_size, unique=True).map(IntSet)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def counterexample():
    return IntSet([0, 2, 3, 4, 7, 11, 12, 14])
