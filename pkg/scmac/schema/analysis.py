from pydantic import BaseModel, Field

from .run import RunConfig


class UserRate(BaseModel):
    """
    Rates of one user's code.
    """

    user: int = Field(..., description="User index, 1 or 2")
    l: int = Field(..., description="Variable degree")
    r: int = Field(..., description="Check degree")
    asymptotic_rate: float = Field(..., description="Rate 1 - l/r of the uncoupled code")
    design_rate: float | None = Field(None, description="Design rate of the coupled chain")
    rate_loss: float | None = Field(None, description="Rate lost to the chain termination")

    class Config:
        from_attributes = True
        populate_by_name = True


class RateResponse(BaseModel):
    """
    Rate summary of a profile.
    """

    profile: str = Field(..., description="The ensemble")
    users: list[UserRate] = Field(..., description="Per-user rates")
    eps_shannon: float = Field(..., description="Shannon threshold at the design rates")
    config: RunConfig = Field(..., description="The resolved run configuration")

    class Config:
        from_attributes = True
        populate_by_name = True


class ShannonResponse(BaseModel):
    """
    Largest erasure probability at which the rate pair is achievable.
    """

    R1: float = Field(..., description="Rate of user 1")
    R2: float = Field(..., description="Rate of user 2")
    eps_shannon: float = Field(..., description="The Shannon threshold")
    exact: str = Field(..., description="The Shannon threshold as a fraction")
    config: RunConfig = Field(..., description="The resolved run configuration")

    class Config:
        from_attributes = True
        populate_by_name = True


class ThresholdResponse(BaseModel):
    """
    BP threshold of the uncoupled system or of a coupled chain.
    """

    profile: str = Field(..., description="The ensemble")
    coupled: bool = Field(..., description="Whether the chain is coupled")
    eps_bp: float = Field(..., description="The BP threshold")
    eps_shannon: float = Field(..., description="Shannon threshold at the uncoupled rates")
    gap: float = Field(..., description="eps_shannon - eps_bp")
    tol_eps: float = Field(..., description="Bisection tolerance")
    config: RunConfig = Field(..., description="The resolved run configuration")

    class Config:
        from_attributes = True
        populate_by_name = True


class SectionRow(BaseModel):
    i: int = Field(..., description="Section index")
    x1: float = Field(..., description="Erasure probability of user 1")
    x2: float = Field(..., description="Erasure probability of user 2")


class ForwardDEResponse(BaseModel):
    """
    Fixed point reached by forward DE from the all-erased constellation.
    """

    profile: str = Field(..., description="The ensemble")
    eps: float = Field(..., description="Channel erasure probability")
    schedule: str = Field(..., description="Update schedule")
    sweeps: int = Field(..., description="Sweeps until the tolerance was met")
    residual: float = Field(..., description="Largest fixed-point equation violation")
    entropy: float = Field(..., description="Average erasure probability of user 1")
    nontrivial: bool = Field(..., description="Whether the fixed point is not the all-zero one")
    constellation: list[SectionRow] = Field(..., description="The fixed point")
    config: RunConfig = Field(..., description="The resolved run configuration")

    class Config:
        from_attributes = True
        populate_by_name = True


class CurvePoint(BaseModel):
    chi: float | None = Field(None, description="Entropy (coupled EBP curves)")
    x: float | None = Field(None, description="Fixed-point parameter (uncoupled EBP curves)")
    eps: float = Field(..., description="Channel erasure probability")
    h_bp: float = Field(..., description="EXIT-like value")

    class Config:
        from_attributes = True
        populate_by_name = True


class ExitCurveResponse(BaseModel):
    """
    One EXIT-like curve.
    """

    profile: str = Field(..., description="The ensemble")
    kind: str = Field(..., description="coupled-ebp, uncoupled-ebp or uncoupled-bp")
    points: list[CurvePoint] = Field(..., description="Curve points")
    gaps: list[float] = Field(default_factory=list, description="Grid values without a fixed point")
    drop_eps: float | None = Field(None, description="Channel value of the steepest segment")
    config: RunConfig = Field(..., description="The resolved run configuration")

    class Config:
        from_attributes = True
        populate_by_name = True


class ShapeReport(BaseModel):
    """
    Shape of a coupled fixed point.
    """

    symmetric: bool = Field(..., description="Mirror symmetric around section 0")
    unimodal: bool = Field(..., description="Nondecreasing then nonincreasing")
    flat_value: float = Field(..., description="Value at the center section")
    flat_width: int = Field(..., description="Sections on the plateau")
    transition_width: int = Field(..., description="Sections from 10% to 90% of the plateau")

    class Config:
        from_attributes = True
        populate_by_name = True


class ConstellationResponse(BaseModel):
    """
    Reverse-DE fixed point at a target entropy and its shape.
    """

    profile: str = Field(..., description="The ensemble")
    chi: float = Field(..., description="Target entropy")
    eps: float = Field(..., description="Channel value of the fixed point")
    h_bp: float = Field(..., description="EXIT-like value of the fixed point")
    residual: float = Field(..., description="Largest fixed-point equation violation")
    sweeps: int = Field(..., description="Reverse-DE sweeps")
    shape: ShapeReport = Field(..., description="Shape of the constellation")
    uncoupled_fp: float = Field(..., description="Stable uncoupled fixed point at eps")
    plateau_gap: float = Field(..., description="|flat_value - uncoupled_fp|")
    config: RunConfig = Field(..., description="The resolved run configuration")

    class Config:
        from_attributes = True
        populate_by_name = True
