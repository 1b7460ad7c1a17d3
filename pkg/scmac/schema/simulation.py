from pydantic import BaseModel, Field

from .run import RunConfig


class SweepRow(BaseModel):
    """
    Aggregated decoding results at one channel value.
    """

    eps: float = Field(..., description="Channel erasure probability")
    trials: int = Field(..., description="Decoded blocks")
    block_errors: int = Field(..., description="Blocks not fully recovered")
    block_error_rate: float = Field(..., description="block_errors / trials")
    mean_residual_u1: float = Field(..., description="Mean unknown fraction of user 1")
    mean_residual_u2: float = Field(..., description="Mean unknown fraction of user 2")
    mean_rounds: float = Field(..., description="Mean decoding rounds")

    class Config:
        from_attributes = True
        populate_by_name = True


class SimulationResponse(BaseModel):
    """
    Finite-length error rates of one ensemble.
    """

    profile: str = Field(..., description="The ensemble")
    M: int = Field(..., description="Variables per section")
    rows: list[SweepRow] = Field(..., description="One row per channel value")
    config: RunConfig = Field(..., description="The resolved run configuration")

    class Config:
        from_attributes = True
        populate_by_name = True
