import logging
import traceback
from collections.abc import Callable

import typer

from scmac.schema import RunConfig
from scmac.server.toolkit import AnalysisServer, Result
from scmac.util.error import BusinessError, InternalError


def execute(server: AnalysisServer, cfg: RunConfig, compute: Callable[[RunConfig], Result | list[Result]]):
    """
    Run one computation, write its outputs and print the one-line summary.
    Failures end the process with the exit code of their error class.
    """
    try:
        outcome = compute(cfg)
        results = outcome if isinstance(outcome, list) else [outcome]
        for result in results:
            for path in server.write(cfg, result, suffix=result.key if len(results) > 1 else ""):
                logging.debug(f"{cfg.command.value}: output {path}")
            typer.echo(result.summary)
    except BusinessError as e:
        logging.warning(f"business error: {repr(e)}")
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(code=e.exit_code)
    except InternalError as e:
        logging.error(f"internal error: {repr(e)}, stacktrace: {traceback.format_exc()}")
        typer.echo("error: internal error", err=True)
        raise typer.Exit(code=e.exit_code)
    except Exception as e:
        logging.error(f"internal error: {repr(e)}, stacktrace: {traceback.format_exc()}")
        typer.echo("error: internal error", err=True)
        raise typer.Exit(code=InternalError.exit_code)
