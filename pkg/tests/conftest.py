import functools

import pytest

from adspec.sat import generate_single_solution_instance

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def instance(n, alpha=3, seed=0):
    return generate_single_solution_instance(n, alpha, seed)


@pytest.fixture(scope="session")
def inst6():
    return instance(6)


@pytest.fixture(scope="session")
def inst8():
    return instance(8)


@pytest.fixture(scope="session")
def inst10():
    return instance(10)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
