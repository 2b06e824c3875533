import pytest

from spbw import fixtures
from spbw.modules import FiniteModule


@pytest.fixture(scope="session")
def fix1():
    return fixtures.fixture("f2xf2-swap")


@pytest.fixture(scope="session")
def fix2():
    return fixtures.fixture("z4-id")


@pytest.fixture(scope="session")
def fix3():
    return fixtures.fixture("dqh-q")


@pytest.fixture(scope="session")
def fix4():
    return fixtures.fixture("f4-frob")


@pytest.fixture(scope="session")
def finite_fixtures(fix1, fix2, fix4):
    return [fix1, fix2, fix4]


@pytest.fixture(scope="session")
def regular1(fix1):
    return FiniteModule.regular(fix1.ring)


@pytest.fixture(scope="session")
def regular2(fix2):
    return FiniteModule.regular(fix2.ring)


@pytest.fixture(scope="session")
def regular4(fix4):
    return FiniteModule.regular(fix4.ring)
