import pytest

from fglab.flaggeom import build_geometry
from fglab.gf import make_field


@pytest.fixture(scope="session")
def gf2():
    return make_field(2)


@pytest.fixture(scope="session")
def gf3():
    return make_field(3)


@pytest.fixture(scope="session")
def gf4():
    return make_field(2, 2)


@pytest.fixture(scope="session")
def gf8():
    return make_field(2, 3)


@pytest.fixture(scope="session")
def gf9():
    return make_field(3, 2)


@pytest.fixture(scope="session")
def geom_q2(gf2):
    return build_geometry(2, gf2)


@pytest.fixture(scope="session")
def geom_q3(gf3):
    return build_geometry(2, gf3)


@pytest.fixture(scope="session")
def geom_q4(gf4):
    return build_geometry(2, gf4)


@pytest.fixture(scope="session")
def geom_q8(gf8):
    return build_geometry(2, gf8)
