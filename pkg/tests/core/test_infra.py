import logging
import sys

import pytest
from asgi_correlation_id import CorrelationIdFilter

from scmac.core.config import Config
from scmac.core.infra import Infra, global_exception_handler, init_global, init_logger, start_run
from scmac.schema import Command, RunConfig


@pytest.fixture
def restore_logging():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.mark.parametrize("json_mode", [False, True])
def test_init_logger(restore_logging, json_mode):
    init_logger(logging.INFO, json_mode)
    root = logging.getLogger()
    assert root.level == logging.INFO
    (handler,) = root.handlers
    assert handler.stream is sys.stderr
    assert any(isinstance(f, CorrelationIdFilter) for f in handler.filters)
    assert logging.getLogger("joblib").level == logging.WARNING


def test_run_id_tags_records(restore_logging):
    init_logger(logging.INFO)
    (handler,) = logging.getLogger().handlers
    run_id = start_run()
    assert len(run_id) == 32
    record = logging.LogRecord("scmac", logging.INFO, __file__, 1, "hello", None, None)
    assert handler.filter(record)
    assert record.correlation_id == run_id[:12]
    assert start_run() != run_id


def test_keyboard_interrupt_exits_130(monkeypatch):
    monkeypatch.setattr(sys, "excepthook", sys.excepthook)
    init_global()
    assert sys.excepthook is global_exception_handler
    with pytest.raises(SystemExit) as e:
        global_exception_handler(KeyboardInterrupt, KeyboardInterrupt(), None)
    assert e.value.code == 130


def test_infra_builds_server_from_config(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("SCMAC_OUTPUT_DIR", str(tmp_path / "runs"))
    monkeypatch.setenv("SCMAC_JOBS", "2")
    Config.reset()
    Infra.reset()
    try:
        infra = Infra()
        assert infra.config is Config()
        assert infra.server.output_dir == str(tmp_path / "runs")
        assert infra.server.jobs(RunConfig(command=Command.SIMULATE)) == 2
        assert infra.server.jobs(RunConfig(command=Command.SIMULATE, jobs=4)) == 4
    finally:
        Config.reset()
        Infra.reset()
