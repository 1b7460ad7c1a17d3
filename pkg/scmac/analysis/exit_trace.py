"""
Reverse DE and EBP EXIT-like curves of equal-degree coupled chains, plus the
shape analysis of the (unstable) fixed points it produces.
"""

import dataclasses
import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.optimize import brentq

from scmac.analysis.channel import effective_erasure
from scmac.analysis.de_coupled import (
    Constellation,
    DEFixedPoint,
    constellation_entropy,
    fp_residual,
    sweep_budget,
    variable_averages,
)
from scmac.analysis.de_single import bp_exit
from scmac.analysis.ensemble import CoupledParams, require_valid
from scmac.util.error import ConvergenceError, NoSolutionError, ParameterError, UnsupportedProfileError

DEFAULT_TOL = 1e-12
MAX_CHI_STEP = 0.01


@dataclasses.dataclass(frozen=True)
class ExitPoint:
    chi: float
    eps: float
    h_bp: float


@dataclasses.dataclass
class ExitCurve:
    """Points of one EBP curve, ordered by chi; ``gaps`` lists the chi values that failed."""

    params: CoupledParams
    points: list[ExitPoint] = dataclasses.field(default_factory=list)
    gaps: list[float] = dataclasses.field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.gaps


@dataclasses.dataclass(frozen=True)
class ShapeReport:
    symmetric: bool
    unimodal: bool
    flat_value: float
    flat_width: int
    transition_width: int


def _require_symmetric(p: CoupledParams):
    if not p.degrees.is_symmetric:
        raise UnsupportedProfileError(f"reverse DE is implemented for equal degrees only, got {p}")


def _solve_channel(x1: np.ndarray, x2: np.ndarray, chi: float, p: CoupledParams) -> tuple[float, np.ndarray, np.ndarray]:
    """
    Channel value whose variable update of the current constellation has entropy
    chi. Each updated entry is affine and nondecreasing in eps.
    """
    d = p.degrees
    yb1 = variable_averages(x1, d.r1, p.w, 0, len(x1))
    yb2 = variable_averages(x2, d.r2, p.w, 0, len(x2))
    a1, own1 = yb2**d.l2, yb1 ** (d.l1 - 1)
    a2, own2 = yb1**d.l1, yb2 ** (d.l2 - 1)

    def entropy_gap(eps: float) -> float:
        return float(np.mean(effective_erasure(eps, a1) * own1)) - chi

    low, high = entropy_gap(0.0), entropy_gap(1.0)
    if low > 0 or high < 0:
        raise NoSolutionError(
            f"no channel value in [0, 1] reaches entropy {chi} for {p}",
            details={"entropy_at_0": low + chi, "entropy_at_1": high + chi},
        )
    if low == 0:
        eps = 0.0
    elif high == 0:
        eps = 1.0
    else:
        eps = brentq(entropy_gap, 0.0, 1.0, xtol=1e-15)
    return eps, effective_erasure(eps, a1) * own1, effective_erasure(eps, a2) * own2


def reverse_de_fp(
    chi_target: float,
    p: CoupledParams,
    tol: float = DEFAULT_TOL,
    max_sweeps: int | None = None,
    start: Constellation | None = None,
    damping: float = 0.0,
) -> DEFixedPoint:
    """
    Fixed point of coupled DE with entropy ``chi_target``, stable or not.

    Every sweep runs the current constellation through the check nodes, picks the
    channel value that gives the variable update the target entropy, and applies
    it. Starts from chi * 1 unless a warm start is given.
    """
    require_valid(p)
    _require_symmetric(p)
    if not 0.0 < chi_target < 1.0:
        raise ParameterError(f"target entropy {chi_target} outside (0, 1)")
    if not 0.0 <= damping < 1.0:
        raise ParameterError(f"damping {damping} outside [0, 1)")
    max_sweeps = max_sweeps or sweep_budget(p)

    if start is None:
        x1 = np.full(p.sections, chi_target)
        x2 = x1.copy()
    else:
        scale = chi_target / max(constellation_entropy(start), 1e-300)
        x1 = np.minimum(np.asarray(start.x1) * scale, 1.0)
        x2 = np.minimum(np.asarray(start.x2) * scale, 1.0)

    for sweep in range(1, max_sweeps + 1):
        eps, new1, new2 = _solve_channel(x1, x2, chi_target, p)
        if damping:
            new1 = (1 - damping) * new1 + damping * x1
            new2 = (1 - damping) * new2 + damping * x2
        change = max(np.max(np.abs(new1 - x1)), np.max(np.abs(new2 - x2)))
        x1, x2 = new1, new2
        if change < tol:
            c = Constellation(x1, x2)
            residual = fp_residual(c, eps, p)
            logging.debug(f"reverse DE {p} at chi={chi_target}: eps={eps:.9f} after {sweep} sweeps")
            return DEFixedPoint(eps, c, residual, sweep)

    raise ConvergenceError(
        f"reverse DE {p} at chi={chi_target} did not settle in {max_sweeps} sweeps",
        details={"chi": chi_target, "last_change": float(change)},
    )


def coupled_exit_value(c: Constellation, p: CoupledParams) -> float:
    """Section average of the EXIT-like function at the variable-side window averages of y."""
    d = p.degrees
    yb1 = variable_averages(np.asarray(c.x1), d.r1, p.w, 0, p.sections)
    yb2 = variable_averages(np.asarray(c.x2), d.r2, p.w, 0, p.sections)
    return float(np.mean(bp_exit(yb1, yb2, d)))


def _continuation(chi_grid: Sequence[float], max_step: float) -> list[tuple[float, bool]]:
    """
    Solve order from the high-entropy end down, with intermediate warm-start
    points so no step exceeds ``max_step``. The flag marks requested points.
    """
    order = sorted(set(chi_grid), reverse=True)
    path = []
    prev = None
    for chi in order:
        if prev is not None:
            substeps = math.ceil((prev - chi) / max_step - 1e-9)
            path.extend((prev - (prev - chi) * k / substeps, False) for k in range(1, substeps))
        path.append((chi, True))
        prev = chi
    return path


def ebp_curve_coupled(
    p: CoupledParams,
    chi_grid: Sequence[float],
    tol: float = DEFAULT_TOL,
    max_step: float = MAX_CHI_STEP,
) -> ExitCurve:
    """
    EBP EXIT-like curve of a coupled chain: one reverse-DE fixed point per chi.

    Solves run from the largest chi down so each warm start keeps the previous
    point's shape; a failed point is recorded as a gap and the next solve starts
    cold.
    """
    if any(not 0.0 < chi < 1.0 for chi in chi_grid):
        raise ParameterError("entropy grid must lie in (0, 1)")

    curve = ExitCurve(p)
    warm = None
    for chi, requested in _continuation(chi_grid, max_step):
        try:
            fp = reverse_de_fp(chi, p, tol=tol, start=warm)
        except (NoSolutionError, ConvergenceError) as e:
            logging.warning(f"EBP curve {p}: no fixed point at chi={chi:.6f}: {e}")
            if requested:
                curve.gaps.append(chi)
            warm = None
            continue
        warm = fp.constellation
        if requested:
            curve.points.append(ExitPoint(chi, fp.eps, coupled_exit_value(fp.constellation, p)))

    curve.points.sort(key=lambda point: point.chi)
    curve.gaps.sort()
    logging.info(f"EBP curve {p}: {len(curve.points)} points, {len(curve.gaps)} gaps")
    return curve


def drop_location(curve: ExitCurve) -> float:
    """
    Channel value of the most vertical segment of an EBP curve, where the
    entropy falls while eps barely moves.
    """
    points = curve.points
    if len(points) < 2:
        raise ParameterError("need at least two curve points")
    best, location = -1.0, points[0].eps
    for a, b in zip(points, points[1:]):
        steepness = (b.chi - a.chi) / max(abs(b.eps - a.eps), 1e-300)
        if steepness > best:
            best, location = steepness, (a.eps + b.eps) / 2
    return location


def analyze_constellation(
    c: Constellation, ref_uncoupled_fp: float | None = None, tol: float = 1e-6
) -> ShapeReport:
    """
    Shape of user 1's constellation: mirror symmetry around i = 0, unimodality,
    the plateau value at the center and how many sections sit on it, and the
    number of sections the left flank needs to climb from 10% to 90% of it.
    """
    x = np.asarray(c.x1)
    symmetric = bool(np.max(np.abs(x - x[::-1])) < tol)

    peak = int(np.argmax(x))
    rising = np.all(np.diff(x[: peak + 1]) >= -tol)
    falling = np.all(np.diff(x[peak:]) <= tol)
    flat_value = float(x[c.L])
    flat_width = int(np.count_nonzero(np.abs(x - flat_value) < tol))

    transition_width = 0
    if flat_value > 0:
        left = x[: c.L + 1]
        start = int(np.argmax(left >= 0.1 * flat_value))
        stop = int(np.argmax(left >= 0.9 * flat_value))
        transition_width = max(0, stop - start)

    if ref_uncoupled_fp is not None and abs(flat_value - ref_uncoupled_fp) > 1e-3:
        logging.warning(f"plateau {flat_value:.6f} is away from the uncoupled fixed point {ref_uncoupled_fp:.6f}")

    return ShapeReport(
        symmetric=symmetric,
        unimodal=bool(rising and falling),
        flat_value=flat_value,
        flat_width=flat_width,
        transition_width=transition_width,
    )
