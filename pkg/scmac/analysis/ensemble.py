"""
Parameter records of the uncoupled (l1, r1) x (l2, r2) system and of the coupled
(l1, r1, l2, r2, L, w) chain, their validation and the closed-form design rate.
"""

import dataclasses
import math

from scmac.util.error import ParameterError

MAX_DEGREE = 64
MAX_HALF_LENGTH = 10**6


@dataclasses.dataclass(frozen=True)
class DegreeProfile:
    """Variable/check degrees of the regular ensemble each user picks its code from."""

    l1: int
    r1: int
    l2: int
    r2: int

    @property
    def is_symmetric(self) -> bool:
        return self.l1 == self.l2 and self.r1 == self.r2

    def user(self, u: int) -> tuple[int, int]:
        """(l, r) of user ``u`` in {1, 2}"""
        if u == 1:
            return self.l1, self.r1
        if u == 2:
            return self.l2, self.r2
        raise ParameterError(f"user must be 1 or 2, got {u}")

    def __str__(self):
        return f"({self.l1},{self.r1},{self.l2},{self.r2})"


@dataclasses.dataclass(frozen=True)
class CoupledParams:
    """A degree profile coupled over sections -L..L with smoothing window w."""

    degrees: DegreeProfile
    L: int
    w: int

    @property
    def sections(self) -> int:
        return 2 * self.L + 1

    def __str__(self):
        d = self.degrees
        return f"({d.l1},{d.r1},{d.l2},{d.r2},{self.L},{self.w})"


def coupled(l1: int, r1: int, l2: int, r2: int, L: int, w: int) -> CoupledParams:
    return CoupledParams(DegreeProfile(l1, r1, l2, r2), L, w)


def validate_degrees(degrees: DegreeProfile) -> list[str]:
    violations = []
    for u in (1, 2):
        l, r = degrees.user(u)
        if l < 2:
            violations.append(f"l{u}={l}: variable degree must be at least 2")
        if r <= l:
            violations.append(f"r{u}={r}: r must exceed l (l{u}={l}) for a positive design rate")
        if max(l, r) > MAX_DEGREE:
            violations.append(f"user {u}: degrees must not exceed {MAX_DEGREE}")
    return violations


def validate(params: CoupledParams) -> list[str]:
    """
    Collect every violated invariant of a coupled parameter set.

    :param params: the coupled ensemble parameters
    :return: human readable violations, empty when the parameters are valid
    """
    violations = validate_degrees(params.degrees)
    if params.L < 1:
        violations.append(f"L={params.L}: chain half-length must be at least 1")
    if params.L > MAX_HALF_LENGTH:
        violations.append(f"L={params.L}: chain half-length must not exceed {MAX_HALF_LENGTH}")
    if params.w < 1:
        violations.append(f"w={params.w}: smoothing window must be at least 1")
    if params.w > 2 * params.L:
        violations.append(f"w={params.w} > 2L={2 * params.L}: window wider than the chain")
    return violations


def require_valid(params: CoupledParams | DegreeProfile):
    """Raise ParameterError carrying the full violation list."""
    if isinstance(params, DegreeProfile):
        violations = validate_degrees(params)
    else:
        violations = validate(params)
    if violations:
        raise ParameterError(f"invalid ensemble {params}: " + "; ".join(violations), details=violations)


def asymptotic_rate(l: int, r: int) -> float:
    return 1.0 - l / r


def design_rate(l: int, r: int, L: int, w: int) -> float:
    """
    Design rate of the (l, r, L, w) ensemble.

    The boundary correction uses the window sum over (i/w)^r for i = 1..w; the
    i = 0 term is zero.
    """
    violations = []
    if l >= r:
        violations.append(f"l={l} must be smaller than r={r}")
    if L < 1 or w < 1:
        violations.append(f"L={L} and w={w} must both be at least 1")
    elif w > 2 * L:
        violations.append(f"w={w} must not exceed 2L={2 * L}")
    if violations:
        raise ParameterError("invalid design-rate arguments: " + "; ".join(violations), details=violations)

    window_sum = math.fsum((i / w) ** r for i in range(1, w + 1))
    return (1.0 - l / r) - (l / r) * (w + 1 - 2 * window_sum) / (2 * L + 1)


def rate_loss(l: int, r: int, L: int, w: int) -> float:
    """Rate lost to the terminated chain ends, relative to the uncoupled rate."""
    return asymptotic_rate(l, r) - design_rate(l, r, L, w)
