import pytest

from scmac.core.config import Config, load_run_file
from scmac.util.error import ParameterError


@pytest.fixture
def config(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    for name in ("SCMAC_DEBUG", "SCMAC_VERBOSE", "SCMAC_LOG_JSON_MODE", "SCMAC_OUTPUT_DIR", "SCMAC_JOBS"):
        monkeypatch.delenv(name, raising=False)
    Config.reset()
    yield Config()
    Config.reset()


def test_defaults(config):
    assert not config.debug
    assert not config.verbose
    assert not config.log_json_mode
    assert config.output_dir == "./output"
    assert config.jobs == 1


def test_environment_overrides(config, monkeypatch):
    monkeypatch.setenv("SCMAC_DEBUG", "True")
    monkeypatch.setenv("SCMAC_VERBOSE", "true")
    monkeypatch.setenv("SCMAC_LOG_JSON_MODE", "true")
    monkeypatch.setenv("SCMAC_OUTPUT_DIR", "/tmp/runs/")
    monkeypatch.setenv("SCMAC_JOBS", "-1")
    assert config.debug and config.verbose and config.log_json_mode
    assert config.output_dir == "/tmp/runs"
    assert config.jobs == -1


def test_verbose_needs_debug(config, monkeypatch):
    monkeypatch.setenv("SCMAC_VERBOSE", "true")
    assert not config.verbose


def test_dotenv_file_is_read(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("SCMAC_JOBS", raising=False)
    (tmp_path / ".env").write_text("SCMAC_JOBS=4\n")
    Config.reset()
    try:
        assert Config().jobs == 4
    finally:
        Config.reset()
        monkeypatch.delenv("SCMAC_JOBS", raising=False)


def test_config_is_shared():
    Config.reset()
    assert Config() is Config()
    Config.reset()


def test_load_run_file(tmp_path):
    path = tmp_path / "run.env"
    path.write_text("# coupled chain\nl1 = 3\nr1=6\nmax-sweeps = 500\neps = 0.3, 0.35\n")
    assert load_run_file(str(path)) == {"l1": "3", "r1": "6", "max_sweeps": "500", "eps": "0.3, 0.35"}


def test_load_run_file_errors(tmp_path):
    with pytest.raises(ParameterError, match="not found"):
        load_run_file(str(tmp_path / "missing.env"))
    path = tmp_path / "run.env"
    path.write_text("l1=\n")
    with pytest.raises(ParameterError, match="without value"):
        load_run_file(str(path))
