import pytest

from faraday_spin.operators import CompositeBasis


@pytest.fixture(scope="session")
def small_basis():
    return CompositeBasis.symmetric(3)


@pytest.fixture(scope="session")
def mid_basis():
    return CompositeBasis.symmetric(8)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for tag in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[tag])
