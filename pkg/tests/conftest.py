import pytest

from quadfields import harvest
from quadfields.sequences import Polynomial, validate


@pytest.fixture(scope="session")
def shanks():
    # u(n) = (2^n + 3)^2 - 8
    return validate(Polynomial.parse("1,6,1"), 2)


@pytest.fixture(scope="session")
def cubic2():
    return validate(Polynomial.parse("2,0,0,1"), 2)


@pytest.fixture(scope="session")
def cubic3():
    return validate(Polynomial.parse("2,0,0,1"), 3)


@pytest.fixture(scope="session")
def pset100():
    return harvest.build_prime_set(2, 100.0)


@pytest.fixture(scope="session")
def pset50():
    return harvest.build_prime_set(2, 50.0)
