from typing import Annotated, Optional

import typer

from scmac.command.analysis import L1, L2, R1, R2, CsvFormat, HalfLength, Output, Window
from scmac.command.handler import execute
from scmac.schema import Command, OutputFormat, RunConfig
from scmac.server.toolkit import AnalysisServer


def register(app: typer.Typer, server: AnalysisServer):
    @app.command("simulate", help="Finite-length block error rates by peeling decoding")
    def simulate(
        eps: Annotated[list[float], typer.Option("--eps", help="Channel erasure probability, repeatable")],
        l1: L1 = 3,
        r1: R1 = 6,
        l2: L2 = 3,
        r2: R2 = 6,
        half_length: HalfLength = 16,
        window: Window = 3,
        M: Annotated[int, typer.Option("-M", "--M", help="Variables per section")] = 2000,
        trials: Annotated[int, typer.Option("--trials", help="Blocks per channel value")] = 100,
        seed: Annotated[int, typer.Option("--seed", help="Seed of graphs and channels")] = 0,
        max_rounds: Annotated[Optional[int], typer.Option("--max-rounds", help="Decoder round budget")] = None,
        profiles: Annotated[bool, typer.Option("--profiles", help="Also write per-section residual profiles")] = False,
        jobs: Annotated[Optional[int], typer.Option("--jobs", "-j", help="Worker pool size (default SCMAC_JOBS)")] = None,
        output: Output = None,
        format: CsvFormat = OutputFormat.CSV,
    ):
        cfg = RunConfig(
            command=Command.SIMULATE,
            l1=l1,
            r1=r1,
            l2=l2,
            r2=r2,
            L=[half_length],
            w=window,
            eps=eps,
            M=M,
            trials=trials,
            seed=seed,
            max_rounds=max_rounds,
            profiles=profiles,
            jobs=jobs,
            output=output,
            format=format,
        )
        execute(server, cfg, server.simulate)
