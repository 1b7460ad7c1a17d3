from .analysis import (
    ConstellationResponse,
    CurvePoint,
    ExitCurveResponse,
    ForwardDEResponse,
    RateResponse,
    SectionRow,
    ShannonResponse,
    ShapeReport,
    ThresholdResponse,
    UserRate,
)
from .run import Command, OutputFormat, RunConfig
from .simulation import SimulationResponse, SweepRow
