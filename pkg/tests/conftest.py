import pytest

from critperc.elliptic import default_context


@pytest.fixture(scope="session")
def ctx():
    return default_context()
