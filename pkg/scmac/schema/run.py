import enum

from pydantic import BaseModel, Field


class Command(str, enum.Enum):
    RATE = "rate"
    SHANNON = "shannon"
    THRESHOLD = "threshold"
    FORWARD_DE = "forward-de"
    EXIT_CURVE = "exit-curve"
    CONSTELLATION = "constellation"
    SIMULATE = "simulate"


class OutputFormat(str, enum.Enum):
    CSV = "csv"
    JSON = "json"


class RunConfig(BaseModel):
    """
    Fully resolved settings of one command invocation, written into every JSON
    output for provenance. Settings a command does not use stay unset.
    """

    command: Command = Field(..., description="The subcommand")
    l1: int | None = Field(None, description="Variable degree of user 1")
    r1: int | None = Field(None, description="Check degree of user 1")
    l2: int | None = Field(None, description="Variable degree of user 2")
    r2: int | None = Field(None, description="Check degree of user 2")
    R1: float | None = Field(None, description="Rate of user 1")
    R2: float | None = Field(None, description="Rate of user 2")
    L: list[int] | None = Field(None, description="Chain half-lengths")
    w: int | None = Field(None, description="Smoothing window")
    coupled: bool | None = Field(None, description="Coupled chain instead of the uncoupled system")
    eps: list[float] | None = Field(None, description="Channel erasure probabilities")
    chi: float | None = Field(None, description="Target entropy of reverse DE")
    tol: float | None = Field(None, description="Fixed-point tolerance")
    tol_eps: float | None = Field(None, description="Bisection tolerance on eps")
    max_sweeps: int | None = Field(None, description="Sweep budget")
    schedule: str | None = Field(None, description="Update schedule of forward DE")
    blocks: int | None = Field(None, description="Subsets of the round-robin schedule")
    damping: float | None = Field(None, description="Damping of reverse DE updates")
    grid_min: float | None = Field(None, description="Lower end of the curve grid")
    grid_max: float | None = Field(None, description="Upper end of the curve grid")
    points: int | None = Field(None, description="Number of grid points")
    bp: bool | None = Field(None, description="Stable BP curve instead of the EBP curve")
    M: int | None = Field(None, description="Variables per section of the finite graph")
    trials: int | None = Field(None, description="Trials per channel value")
    max_rounds: int | None = Field(None, description="Round budget of the peeling decoder")
    profiles: bool | None = Field(None, description="Also write per-section residual profiles")
    seed: int | None = Field(None, description="Random seed")
    jobs: int | None = Field(None, description="Worker pool size")
    output: str | None = Field(None, description="Output file path")
    format: OutputFormat = Field(OutputFormat.JSON, description="Output format: csv or json")

    class Config:
        from_attributes = True
        populate_by_name = True
