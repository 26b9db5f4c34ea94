import pytest

import twistheights as th


@pytest.fixture(scope="session")
def e163():
    """Base curve y^2 = x^3 + 2x^2 + 163x + 2205."""
    return th.make_short_model(2, 163, 2205)


@pytest.fixture(scope="session")
def family():
    return th.reference_family()


@pytest.fixture(scope="session")
def inst1(family):
    """t = 1 instance: D = 339, point (5085, 574605)."""
    return th.instantiate(family, 1)


@pytest.fixture(scope="session")
def e339(inst1):
    return inst1.curve


@pytest.fixture(scope="session")
def p339(inst1):
    return inst1.point
