import pytest

from qcluster.affinization import CharacterEngine
from qcluster.cartan import build_cartan


@pytest.fixture(scope="session")
def cd3():
    return build_cartan(3)


@pytest.fixture(scope="session")
def cd4():
    return build_cartan(4)


@pytest.fixture(scope="session")
def engine3(cd3):
    return CharacterEngine(cd3)


@pytest.fixture(scope="session")
def engine4(cd4):
    return CharacterEngine(cd4)


ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance():
    """Record one summary line per criterion; printed at the end of the run."""

    def record(number: int, ok: bool, detail: str):
        ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(ACCEPTANCE_LINES[number])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
