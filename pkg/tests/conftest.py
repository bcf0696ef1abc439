import pytest

from commdetect import karate_club


@pytest.fixture(scope="session")
def karate():
    return karate_club()
