import pytest


@pytest.fixture(scope="session")
def harness():
    from coneflow.acceptance import Harness
    return Harness(verbose=True)
