"""
The 2-user binary adder channel with erasures: Y = X1 + X2 with probability
1 - eps, erased otherwise.
"""

import dataclasses

from scmac.analysis.ensemble import CoupledParams, DegreeProfile, asymptotic_rate, design_rate
from scmac.util.error import ParameterError


@dataclasses.dataclass(frozen=True)
class RatePair:
    R1: float
    R2: float

    def __post_init__(self):
        for name in ("R1", "R2"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ParameterError(f"{name}={value} must lie in [0, 1]")


@dataclasses.dataclass(frozen=True)
class ChannelErasure:
    eps: float

    def __post_init__(self):
        if not 0 <= self.eps <= 1:
            raise ParameterError(f"erasure probability {self.eps} must lie in [0, 1]")


@dataclasses.dataclass(frozen=True)
class MutualInformations:
    I_cond: float
    I_joint: float
    I_single: float


def shannon_threshold(rates: RatePair) -> float:
    """
    Largest erasure probability at which the rate pair is inside the capacity
    region. Exact when the rates are ``fractions.Fraction``.
    """
    R1, R2 = rates.R1, rates.R2
    eps = min(1 - R1, 1 - R2, 1 - 2 * (R1 + R2) / 3)
    return max(0, min(1, eps))


def shannon_threshold_for(params: DegreeProfile | CoupledParams, coupled: bool = False) -> float:
    """
    Shannon threshold at the users' rates: the uncoupled rates 1 - l/r by default,
    the coupled design rates when ``coupled`` is set (requires CoupledParams).
    """
    if coupled:
        if not isinstance(params, CoupledParams):
            raise ParameterError("design rates need L and w")
        d = params.degrees
        rates = RatePair(
            max(0.0, design_rate(d.l1, d.r1, params.L, params.w)),
            max(0.0, design_rate(d.l2, d.r2, params.L, params.w)),
        )
    else:
        d = params.degrees if isinstance(params, CoupledParams) else params
        rates = RatePair(asymptotic_rate(d.l1, d.r1), asymptotic_rate(d.l2, d.r2))
    return shannon_threshold(rates)


def mutual_informations(eps: float) -> MutualInformations:
    ChannelErasure(eps)
    return MutualInformations(
        I_cond=1 - eps,
        I_joint=3 * (1 - eps) / 2,
        I_single=(1 - eps) / 2,
    )


def in_rate_region(rates: RatePair, eps: float) -> bool:
    mi = mutual_informations(eps)
    return rates.R1 <= mi.I_cond and rates.R2 <= mi.I_cond and rates.R1 + rates.R2 <= mi.I_joint


def effective_erasure(eps, mu):
    """
    Erasure probability of the BEC either user sees when the message from the
    MAC function node about the other user is erased with probability ``mu``.
    Works elementwise on numpy arrays.
    """
    return eps + (1 - eps) * mu / 2
