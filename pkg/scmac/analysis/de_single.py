"""
Density evolution of the uncoupled system: each user runs a regular LDPC code
and the two codes exchange erasure messages through the MAC function nodes.
"""

import dataclasses
import logging
from collections.abc import Iterator, Sequence

from scmac.analysis.channel import effective_erasure
from scmac.analysis.ensemble import DegreeProfile
from scmac.util.error import ConvergenceError, ParameterError, UnsupportedProfileError

DEFAULT_TOL = 1e-12
DEFAULT_TOL_EPS = 1e-6
DEFAULT_MAX_ITERS = 10**6
DECODED = 1e-8


@dataclasses.dataclass(frozen=True)
class ScalarDEState:
    """Variable-to-check (x) and check-to-variable (y) erasure probabilities per user."""

    x1: float
    y1: float
    x2: float
    y2: float

    @classmethod
    def erased(cls) -> "ScalarDEState":
        return cls(1.0, 1.0, 1.0, 1.0)

    def max_change(self, other: "ScalarDEState") -> float:
        return max(
            abs(self.x1 - other.x1),
            abs(self.y1 - other.y1),
            abs(self.x2 - other.x2),
            abs(self.y2 - other.y2),
        )

    @property
    def max_x(self) -> float:
        return max(self.x1, self.x2)


@dataclasses.dataclass(frozen=True)
class EbpPoint:
    """One point (x, eps(x), h(x)) of the parametric EBP EXIT-like curve."""

    x: float
    eps: float
    h: float

    @property
    def physical(self) -> bool:
        return 0.0 <= self.eps <= 1.0


def check_node(x: float, r: int) -> float:
    return 1.0 - (1.0 - x) ** (r - 1)


def variable_node(eps: float, y_own: float, y_other: float, l_own: int, l_other: int) -> float:
    return effective_erasure(eps, y_other**l_other) * y_own ** (l_own - 1)


def de_step_uncoupled(state: ScalarDEState, eps: float, deg: DegreeProfile) -> ScalarDEState:
    """One parallel round: check nodes from the incoming x, then variable nodes."""
    y1 = check_node(state.x1, deg.r1)
    y2 = check_node(state.x2, deg.r2)
    x1 = variable_node(eps, y1, y2, deg.l1, deg.l2)
    x2 = variable_node(eps, y2, y1, deg.l2, deg.l1)
    return ScalarDEState(x1, y1, x2, y2)


def iterate_uncoupled(
    eps: float, deg: DegreeProfile, state: ScalarDEState | None = None
) -> Iterator[ScalarDEState]:
    """Endless forward DE sequence, starting from the all-erased state by default."""
    state = state or ScalarDEState.erased()
    while True:
        state = de_step_uncoupled(state, eps, deg)
        yield state


def fp_residual_uncoupled(state: ScalarDEState, eps: float, deg: DegreeProfile) -> float:
    """Largest violation of the four fixed-point equations at ``state``."""
    nxt = de_step_uncoupled(state, eps, deg)
    return max(
        abs(check_node(state.x1, deg.r1) - state.y1),
        abs(check_node(state.x2, deg.r2) - state.y2),
        abs(variable_node(eps, state.y1, state.y2, deg.l1, deg.l2) - state.x1),
        abs(variable_node(eps, state.y2, state.y1, deg.l2, deg.l1) - state.x2),
        abs(nxt.x1 - state.x1),
        abs(nxt.x2 - state.x2),
    )


def forward_fp_uncoupled(
    eps: float,
    deg: DegreeProfile,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> ScalarDEState:
    """
    Iterate forward DE from the all-erased state until the largest componentwise
    change drops below ``tol``.
    """
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"eps={eps} must lie in [0, 1]")

    prev = ScalarDEState.erased()
    for it, state in enumerate(iterate_uncoupled(eps, deg, prev), start=1):
        if state.max_change(prev) < tol:
            logging.debug(f"uncoupled DE {deg} at eps={eps} settled after {it} iterations")
            return state
        if it >= max_iters:
            raise ConvergenceError(
                f"uncoupled DE {deg} at eps={eps} did not settle in {max_iters} iterations",
                details={"eps": eps, "last_change": state.max_change(prev)},
            )
        prev = state


def decodes_uncoupled(eps: float, deg: DegreeProfile, max_iters: int = DEFAULT_MAX_ITERS) -> bool:
    """
    Whether forward DE reaches the all-zero state. Stops as soon as both x drop
    below the decoding floor; the forward sequence is nonincreasing.
    """
    prev = ScalarDEState.erased()
    for it, state in enumerate(iterate_uncoupled(eps, deg, prev), start=1):
        if state.max_x < DECODED:
            return True
        if state.max_change(prev) < DEFAULT_TOL:
            return False
        if it >= max_iters:
            logging.warning(f"uncoupled DE {deg} at eps={eps} exhausted {max_iters} iterations, counted as failure")
            return False
        prev = state


def bisect_threshold(decodes, tol_eps: float, label: str) -> float:
    """
    Supremum of the decodable channel values in [0, 1]. ``decodes`` must be
    true up to some point and false beyond it.
    """
    if tol_eps <= 0:
        raise ParameterError(f"tol_eps must be positive, got {tol_eps}")
    if not decodes(0.0):
        logging.info(f"{label}: not decodable even at eps=0")
        return 0.0

    low, high = 0.0, 1.0
    while high - low > tol_eps:
        middle = low + (high - low) / 2
        if decodes(middle):
            low = middle
        else:
            high = middle
        logging.debug(f"{label}: bracket [{low:.9f}, {high:.9f}]")
    return low


def bp_threshold_uncoupled(deg: DegreeProfile, tol_eps: float = DEFAULT_TOL_EPS) -> float:
    eps = bisect_threshold(lambda e: decodes_uncoupled(e, deg), tol_eps, f"uncoupled {deg}")
    logging.info(f"uncoupled BP threshold of {deg}: {eps:.6f}")
    return eps


def bp_exit(y1, y2, deg: DegreeProfile):
    """
    BP EXIT-like value: entropy 3/2 of Z = X1 + X2 when both users' a-priori
    messages are erased, 1 when exactly one is. Elementwise on numpy arrays.
    """
    a = y1**deg.l1
    b = y2**deg.l2
    return 1.5 * a * b + a * (1 - b) + (1 - a) * b


def _require_symmetric(deg: DegreeProfile):
    if not deg.is_symmetric:
        raise UnsupportedProfileError(
            f"the single-parameter fixed-point family needs equal degrees, got {deg}"
        )


def channel_for_fixed_point(x: float, l: int, r: int) -> float:
    """Channel value making x a fixed point of the equal-degree recursion."""
    y = check_node(x, r)
    half = y**l / 2
    return (x / y ** (l - 1) - half) / (1 - half)


def ebp_curve_uncoupled(deg: DegreeProfile, x_grid: Sequence[float]) -> list[EbpPoint]:
    """
    Trace all fixed points of the equal-degree system parametrized by x.
    Points with eps(x) outside [0, 1] are kept; ``EbpPoint.physical`` flags them.
    """
    _require_symmetric(deg)
    points = []
    for x in x_grid:
        if not 0.0 < x <= 1.0:
            raise ParameterError(f"x={x} outside (0, 1]")
        y = check_node(x, deg.r1)
        points.append(EbpPoint(x, channel_for_fixed_point(x, deg.l1, deg.r1), bp_exit(y, y, deg)))
    return points


def bp_curve_uncoupled(
    deg: DegreeProfile, eps_grid: Sequence[float], tol: float = DEFAULT_TOL
) -> list[tuple[float, float]]:
    """BP EXIT-like curve: (eps, h) at the fixed point forward DE reaches."""
    curve = []
    for eps in eps_grid:
        fp = forward_fp_uncoupled(eps, deg, tol=tol)
        curve.append((eps, float(bp_exit(fp.y1, fp.y2, deg))))
    return curve
