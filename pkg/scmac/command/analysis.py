from typing import Annotated, Optional

import typer

from scmac.analysis import de_coupled, de_single, exit_trace
from scmac.command.handler import execute
from scmac.schema import Command, OutputFormat, RunConfig
from scmac.server.toolkit import AnalysisServer

L1 = Annotated[int, typer.Option("--l1", help="Variable degree of user 1")]
R1 = Annotated[int, typer.Option("--r1", help="Check degree of user 1")]
L2 = Annotated[int, typer.Option("--l2", help="Variable degree of user 2")]
R2 = Annotated[int, typer.Option("--r2", help="Check degree of user 2")]
HalfLength = Annotated[int, typer.Option("-L", "--half-length", help="Chain half-length: sections -L..L")]
Window = Annotated[int, typer.Option("-w", "--window", help="Smoothing window")]
Output = Annotated[Optional[str], typer.Option("-o", "--output", help="Output file (default: SCMAC_OUTPUT_DIR/<name>.<format>)")]


def _format_option(default: OutputFormat):
    return Annotated[OutputFormat, typer.Option("--format", help=f"Output format (default {default.value})")]


JsonFormat = _format_option(OutputFormat.JSON)
CsvFormat = _format_option(OutputFormat.CSV)


def register(app: typer.Typer, server: AnalysisServer):
    """
    Register the density-evolution commands.

    :param app: the command line application
    :param server: the server doing the work
    """

    @app.command("rate", help="Design rates and rate loss of a coupled ensemble")
    def rate(
        l1: L1 = 3,
        r1: R1 = 6,
        l2: L2 = 3,
        r2: R2 = 6,
        half_length: HalfLength = 16,
        window: Window = 3,
        output: Output = None,
        format: JsonFormat = OutputFormat.JSON,
    ):
        cfg = RunConfig(
            command=Command.RATE, l1=l1, r1=r1, l2=l2, r2=r2, L=[half_length], w=window, output=output, format=format
        )
        execute(server, cfg, server.rate)

    @app.command("shannon", help="Shannon threshold of a rate pair, or of the degrees' rates")
    def shannon(
        R1: Annotated[Optional[float], typer.Option("--R1", help="Rate of user 1")] = None,
        R2: Annotated[Optional[float], typer.Option("--R2", help="Rate of user 2")] = None,
        l1: Annotated[Optional[int], typer.Option("--l1", help="Variable degree of user 1")] = None,
        r1: Annotated[Optional[int], typer.Option("--r1", help="Check degree of user 1")] = None,
        l2: Annotated[Optional[int], typer.Option("--l2", help="Variable degree of user 2")] = None,
        r2: Annotated[Optional[int], typer.Option("--r2", help="Check degree of user 2")] = None,
        output: Output = None,
        format: JsonFormat = OutputFormat.JSON,
    ):
        cfg = RunConfig(
            command=Command.SHANNON, R1=R1, R2=R2, l1=l1, r1=r1, l2=l2, r2=r2, output=output, format=format
        )
        execute(server, cfg, server.shannon)

    @app.command("threshold", help="BP threshold by bisection on forward DE")
    def threshold(
        coupled: Annotated[bool, typer.Option("--coupled/--uncoupled", help="Coupled chain or uncoupled system")] = False,
        l1: L1 = 3,
        r1: R1 = 6,
        l2: L2 = 3,
        r2: R2 = 6,
        half_length: HalfLength = 16,
        window: Window = 3,
        tol_eps: Annotated[float, typer.Option("--tol-eps", help="Bisection tolerance on eps")] = de_single.DEFAULT_TOL_EPS,
        output: Output = None,
        format: JsonFormat = OutputFormat.JSON,
    ):
        cfg = RunConfig(
            command=Command.THRESHOLD,
            coupled=coupled,
            l1=l1,
            r1=r1,
            l2=l2,
            r2=r2,
            L=[half_length] if coupled else None,
            w=window if coupled else None,
            tol_eps=tol_eps,
            output=output,
            format=format,
        )
        execute(server, cfg, server.threshold)

    @app.command("forward-de", help="Forward DE fixed point of a coupled chain")
    def forward_de(
        eps: Annotated[float, typer.Option("--eps", help="Channel erasure probability")],
        l1: L1 = 3,
        r1: R1 = 6,
        l2: L2 = 3,
        r2: R2 = 6,
        half_length: HalfLength = 16,
        window: Window = 3,
        schedule: Annotated[
            de_coupled.ScheduleKind, typer.Option("--schedule", help="Section update order")
        ] = de_coupled.ScheduleKind.PARALLEL,
        blocks: Annotated[int, typer.Option("--blocks", help="Interleaved subsets of the round-robin schedule")] = 2,
        seed: Annotated[int, typer.Option("--seed", help="Seed of the random schedule")] = 0,
        tol: Annotated[float, typer.Option("--tol", help="Stop when a sweep changes no entry more")] = de_coupled.DEFAULT_TOL,
        max_sweeps: Annotated[Optional[int], typer.Option("--max-sweeps", help="Sweep budget (default grows with L)")] = None,
        output: Output = None,
        format: CsvFormat = OutputFormat.CSV,
    ):
        cfg = RunConfig(
            command=Command.FORWARD_DE,
            l1=l1,
            r1=r1,
            l2=l2,
            r2=r2,
            L=[half_length],
            w=window,
            eps=[eps],
            schedule=schedule.value,
            blocks=blocks,
            seed=seed,
            tol=tol,
            max_sweeps=max_sweeps,
            output=output,
            format=format,
        )
        execute(server, cfg, server.forward_de)

    @app.command("exit-curve", help="EXIT-like curves: coupled EBP per L, or uncoupled EBP/BP")
    def exit_curve(
        coupled: Annotated[bool, typer.Option("--coupled/--uncoupled", help="Coupled chain or uncoupled system")] = True,
        bp: Annotated[bool, typer.Option("--bp", help="Uncoupled only: stable BP curve instead of the EBP curve")] = False,
        l1: L1 = 3,
        r1: R1 = 6,
        l2: L2 = 3,
        r2: R2 = 6,
        half_length: Annotated[
            Optional[list[int]], typer.Option("-L", "--half-length", help="Chain half-length, repeatable")
        ] = None,
        window: Window = 3,
        grid_min: Annotated[Optional[float], typer.Option("--grid-min", help="Grid start (chi, x or eps)")] = None,
        grid_max: Annotated[Optional[float], typer.Option("--grid-max", help="Grid end (chi, x or eps)")] = None,
        points: Annotated[int, typer.Option("--points", help="Grid points")] = 99,
        tol: Annotated[float, typer.Option("--tol", help="Reverse DE tolerance")] = exit_trace.DEFAULT_TOL,
        jobs: Annotated[Optional[int], typer.Option("--jobs", "-j", help="Worker pool size (default SCMAC_JOBS)")] = None,
        output: Output = None,
        format: CsvFormat = OutputFormat.CSV,
    ):
        cfg = RunConfig(
            command=Command.EXIT_CURVE,
            coupled=coupled,
            bp=bp,
            l1=l1,
            r1=r1,
            l2=l2,
            r2=r2,
            L=(half_length or [16]) if coupled else None,
            w=window if coupled else None,
            grid_min=grid_min,
            grid_max=grid_max,
            points=points,
            tol=tol,
            jobs=jobs,
            output=output,
            format=format,
        )
        execute(server, cfg, server.exit_curves)

    @app.command("constellation", help="Reverse DE fixed point at a target entropy and its shape")
    def constellation(
        chi: Annotated[float, typer.Option("--chi", help="Target entropy in (0, 1)")],
        l1: L1 = 3,
        r1: R1 = 6,
        l2: L2 = 3,
        r2: R2 = 6,
        half_length: HalfLength = 16,
        window: Window = 3,
        tol: Annotated[float, typer.Option("--tol", help="Reverse DE tolerance")] = exit_trace.DEFAULT_TOL,
        damping: Annotated[float, typer.Option("--damping", help="Weight of the previous iterate")] = 0.0,
        max_sweeps: Annotated[Optional[int], typer.Option("--max-sweeps", help="Sweep budget (default grows with L)")] = None,
        output: Output = None,
        format: JsonFormat = OutputFormat.JSON,
    ):
        cfg = RunConfig(
            command=Command.CONSTELLATION,
            l1=l1,
            r1=r1,
            l2=l2,
            r2=r2,
            L=[half_length],
            w=window,
            chi=chi,
            tol=tol,
            damping=damping,
            max_sweeps=max_sweeps,
            output=output,
            format=format,
        )
        execute(server, cfg, server.constellation)
