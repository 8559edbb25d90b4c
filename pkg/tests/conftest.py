import pytest

from hrs_lab.fixtures import fixture_a2, fixture_a3


@pytest.fixture(scope="session")
def a2():
    return fixture_a2()


@pytest.fixture(scope="session")
def a3():
    return fixture_a3()
