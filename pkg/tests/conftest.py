import logging
import os
import sys

import pytest

# Make the packages at the repository root importable by pytest
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), os.pardir)))

from twisted_vw.vw_base import LOGGER_NAME  # noqa: E402


@pytest.fixture(autouse=True)
def reset_vwlab_logger():
    """
    The CLI installs its own stderr handler on the "vwlab" logger; restore
    propagation after each test so caplog keeps working.
    """
    yield
    logger = logging.getLogger(LOGGER_NAME)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.propagate = True
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def no_vwlab_env(monkeypatch):
    monkeypatch.delenv("VWLAB_PRECISION", raising=False)
    monkeypatch.delenv("VWLAB_LOG_LEVEL", raising=False)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs the full verification suite at default precision")
