import logging

import pytest
from typer.testing import CliRunner

from scmac.command.route import build_app
from scmac.server.toolkit import AnalysisServer


@pytest.fixture(autouse=True)
def restore_logging():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def server(tmp_path):
    return AnalysisServer(output_dir=str(tmp_path / "output"))


@pytest.fixture
def app(server):
    return build_app(server)


@pytest.fixture
def invoke(app):
    runner = CliRunner()

    def run(*args):
        return runner.invoke(app, [str(arg) for arg in args])

    return run
