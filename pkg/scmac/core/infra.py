import logging
import sys
import uuid

from asgi_correlation_id import CorrelationIdFilter, correlation_id

from scmac.core.config import Config
from scmac.server.toolkit import AnalysisServer
from scmac.util.singleton import singleton

RUN_ID_LENGTH = 12

TEXT_FORMAT = "%(asctime)s - %(log_color)s%(levelname)s%(reset)s - [run %(correlation_id)s] %(name)s:%(lineno)d - %(message)s"
JSON_FIELDS = "%(correlation_id)s %(message)s %(levelname)s %(name)s %(asctime)s %(module)s %(funcName)s %(lineno)d"


def init_global():
    """
    Install the process-wide exception hook
    """
    sys.excepthook = global_exception_handler


def global_exception_handler(exc_type, exc_value, exc_traceback):
    # Ctrl-C during a long sweep is not a crash
    if exc_type == KeyboardInterrupt:
        sys.exit(130)

    logging.error(
        "Uncaught exception",
        exc_info=(exc_type, exc_value, exc_traceback),
    )


def _formatter(json_mode: bool) -> logging.Formatter:
    if json_mode:
        from pythonjsonlogger.json import JsonFormatter

        return JsonFormatter(JSON_FIELDS, rename_fields={"correlation_id": "run_id", "levelname": "level"})

    import colorlog

    return colorlog.ColoredFormatter(
        TEXT_FORMAT,
        reset=True,
        log_colors={
            "DEBUG": "cyan",
            "INFO": "green",
            "WARNING": "yellow",
            "ERROR": "red",
            "CRITICAL": "red,bg_white",
        },
        style="%",
    )


def init_logger(level=None, json_mode=None):
    """
    Route all logging to stderr, tagged with the run id; stdout is reserved for
    the command summaries.
    """
    ch = logging.StreamHandler(stream=sys.stderr)
    ch.addFilter(CorrelationIdFilter(uuid_length=RUN_ID_LENGTH, default_value="-"))
    ch.setFormatter(_formatter(bool(json_mode)))

    logging.basicConfig(level=level, handlers=[ch], force=True)
    # joblib's worker chatter
    logging.getLogger("joblib").setLevel(logging.WARNING)


def start_run() -> str:
    """
    Start a new run id for this invocation's log lines
    """
    run_id = uuid.uuid4().hex
    correlation_id.set(run_id)
    return run_id


@singleton
class Infra:
    """Process-wide resources: the configuration and the analysis server built from it."""

    def __init__(self):
        self.__config = Config()
        self.__server = AnalysisServer(output_dir=self.__config.output_dir, jobs=self.__config.jobs)

    @property
    def config(self) -> Config:
        return self.__config

    @property
    def server(self) -> AnalysisServer:
        return self.__server
