import pytest

from gaugecolor import build_dual_lattice, derive_code


@pytest.fixture(scope="session")
def lattice3():
    return build_dual_lattice(3)


@pytest.fixture(scope="session")
def code3(lattice3):
    return derive_code(lattice3)


@pytest.fixture(scope="session")
def lattice5():
    return build_dual_lattice(5)


@pytest.fixture(scope="session")
def code5(lattice5):
    return derive_code(lattice5)
