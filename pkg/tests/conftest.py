"""Defines fixtures available to all tests."""

import pytest
from click.testing import CliRunner

from tensorsynth.app import Application, create_app
from tensorsynth.registry import OperationRegistry, WeightTable
from tensorsynth.search.task import SearchConfig


@pytest.fixture(scope="session")
def app() -> Application:
    """Create application for the tests."""
    return create_app("tests.settings")


@pytest.fixture(scope="session")
def registry(app) -> OperationRegistry:
    return app.registry


@pytest.fixture(scope="session")
def weights(app) -> WeightTable:
    return app.weights


@pytest.fixture
def settings(app) -> SearchConfig:
    """Search settings of the test configuration."""
    return SearchConfig.from_config(app.config)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()

