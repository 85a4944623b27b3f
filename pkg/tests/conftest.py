import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from diamondlab import DiamondSpec, build_cached


@pytest.fixture(scope="session")
def d13():
    return build_cached(DiamondSpec(1, 3))


@pytest.fixture(scope="session")
def d14():
    return build_cached(DiamondSpec(1, 4))


@pytest.fixture(scope="session")
def d23():
    return build_cached(DiamondSpec(2, 3))


@pytest.fixture(scope="session")
def d24():
    return build_cached(DiamondSpec(2, 4))


@pytest.fixture(scope="session")
def d33():
    return build_cached(DiamondSpec(3, 3))


@pytest.fixture(scope="session")
def dw33():
    from diamondlab import OMEGA

    return build_cached(DiamondSpec(OMEGA, 3, limit_width=3))
