import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cdga_config.presets import preset_pd


@pytest.fixture(scope="session")
def s2():
    return preset_pd("s2")


@pytest.fixture(scope="session")
def s3():
    return preset_pd("s3")


@pytest.fixture(scope="session")
def s4():
    return preset_pd("s4")


@pytest.fixture(scope="session")
def s5():
    return preset_pd("s5")


@pytest.fixture(scope="session")
def cp2():
    return preset_pd("cp2")


@pytest.fixture(scope="session")
def s2xs3():
    return preset_pd("s2xs3")


@pytest.fixture(scope="session")
def s3xs4():
    return preset_pd("s3xs4")
