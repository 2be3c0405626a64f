import pytest

from hypercollapse import Hypergraph

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def chain():
    # patch {0}, edges {0,1}, {1,2}
    return Hypergraph(3, [[0], [0, 1], [1, 2]])
