import pytest

from pellpower.modular_certificates import load_curves


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running verification")


@pytest.fixture(scope="session")
def curves():
    return load_curves()
