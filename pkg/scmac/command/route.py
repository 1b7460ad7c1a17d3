import logging
from typing import Annotated, Optional

import typer

from scmac.command import analysis, simulation
from scmac.core.config import Config, load_run_file
from scmac.core.infra import init_logger, start_run
from scmac.server.toolkit import AnalysisServer
from scmac.util.error import BusinessError


def _split(value: str) -> list[str]:
    return [item for item in value.replace(",", " ").split() if item]


def run_file_defaults(ctx: typer.Context, path: str) -> dict:
    """
    Option defaults of the invoked command from a run file. Keys are the long
    option names with ``-`` written as ``_``; repeatable options take a comma
    or space separated list.
    """
    try:
        values = load_run_file(path)
    except BusinessError as e:
        raise typer.BadParameter(str(e), ctx=ctx, param_hint="--config")

    command = ctx.command.get_command(ctx, ctx.invoked_subcommand) if ctx.invoked_subcommand else None
    if command is None:
        return {}
    params = {param.name: param for param in command.params}
    unknown = sorted(set(values) - set(params))
    if unknown:
        raise typer.BadParameter(
            f"unknown keys for '{ctx.invoked_subcommand}': {', '.join(unknown)}", ctx=ctx, param_hint="--config"
        )
    return {key: _split(value) if params[key].multiple else value for key, value in values.items()}


def register_commands(app: typer.Typer, server: AnalysisServer):
    """
    This function registers all commands on the application.

    :param app: The command line application.
    :param server: The server object.
    """
    analysis.register(app, server)
    simulation.register(app, server)


def build_app(server: AnalysisServer, config: Optional[Config] = None) -> typer.Typer:
    app = typer.Typer(
        name="scmac",
        help="Density evolution, EXIT-like curves and finite-length simulation of coupled codes on the erasure adder MAC",
        no_args_is_help=True,
        add_completion=False,
        pretty_exceptions_enable=False,
    )

    @app.callback()
    def main(
        ctx: typer.Context,
        run_file: Annotated[
            Optional[str], typer.Option("--config", "-c", help="Run file with one 'key = value' per line")
        ] = None,
        verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging")] = False,
    ):
        cfg = config or Config()
        init_logger(
            level=logging.DEBUG if verbose or cfg.verbose else logging.INFO,
            json_mode=cfg.log_json_mode,
        )
        run_id = start_run()
        logging.debug(f"run {run_id}: {ctx.invoked_subcommand}")

        if run_file:
            ctx.default_map = {ctx.invoked_subcommand: run_file_defaults(ctx, run_file)}

    register_commands(app, server)
    return app
