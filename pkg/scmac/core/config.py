import logging
import os

from dotenv import dotenv_values, find_dotenv, load_dotenv

from scmac.util.error import ParameterError
from scmac.util.singleton import singleton


@singleton
class Config:

    def __init__(self):
        logging.debug("loading configuration ...")
        load_dotenv(find_dotenv(usecwd=True), override=True)

    @property
    def debug(self) -> bool:
        return os.getenv("SCMAC_DEBUG", "false").lower() == "true"

    @property
    def verbose(self) -> bool:
        return self.debug and os.getenv("SCMAC_VERBOSE", "false").lower() == "true"

    @property
    def log_json_mode(self) -> bool:
        return os.getenv("SCMAC_LOG_JSON_MODE", "false").lower() == "true"

    @property
    def output_dir(self) -> str:
        """Default directory for CSV/JSON outputs"""
        return os.getenv("SCMAC_OUTPUT_DIR", "./output").rstrip("/") or "."

    @property
    def jobs(self) -> int:
        return int(os.getenv("SCMAC_JOBS", "1"))


def load_run_file(path: str) -> dict[str, str]:
    """
    Read a flat run file: one ``key = value`` per line, ``#`` comments.

    :param path: path of the run file
    :return: option values keyed by parameter name (``-`` normalized to ``_``)
    """
    if not os.path.isfile(path):
        raise ParameterError(f"run file not found: {path}")

    values = {}
    for key, value in dotenv_values(path).items():
        if value is None or value == "":
            raise ParameterError(f"run file key without value: {key}")
        values[key.strip().replace("-", "_")] = value.strip()

    logging.debug(f"loaded {len(values)} settings from {path}")
    return values
