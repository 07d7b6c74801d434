import pytest

from finkat.corpus import (
    ab_fragment,
    boolean_lattice,
    finpreord_localization,
    finset_tier,
    pointed_finpreord_localization,
    pointed_finset_tier,
    pointed_finset_with_initial,
    semilattice_localization,
)

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def b2():
    return boolean_lattice()


@pytest.fixture(scope="session")
def b2_loc(b2):
    return semilattice_localization(b2)


@pytest.fixture(scope="session")
def finset24():
    return finset_tier(2, 4)


@pytest.fixture(scope="session")
def finset39():
    return finset_tier(3, 9)


@pytest.fixture(scope="session")
def pointed_initial():
    return pointed_finset_with_initial(2, 4)


@pytest.fixture(scope="session")
def pointed24():
    return pointed_finset_tier(2, 4)


@pytest.fixture(scope="session")
def ab():
    return ab_fragment()


@pytest.fixture(scope="session")
def preord():
    return finpreord_localization(2, 4)


@pytest.fixture(scope="session")
def pointed_preord():
    return pointed_finpreord_localization(2, 4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
