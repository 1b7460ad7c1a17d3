"""
Density evolution of the coupled (l1, r1, l2, r2, L, w) chain.

A constellation stores only the variable-to-check erasure probabilities x of
sections -L..L (array index i + L); check-to-variable values are recomputed
from x whenever they are needed. Sections outside the chain read as zero.
"""

import dataclasses
import enum
import logging
from collections.abc import Callable, Iterable, Iterator, Sequence

import numpy as np

from scmac.analysis.channel import effective_erasure
from scmac.analysis.de_single import DECODED, bisect_threshold
from scmac.analysis.ensemble import CoupledParams, require_valid
from scmac.util.error import ConvergenceError, ParameterError

DEFAULT_TOL = 1e-11
DEFAULT_TOL_EPS = 1e-6
MIN_SWEEP_BUDGET = 2 * 10**5
# sweeps per section a decoding front needs at distance 1 below threshold
FRONT_SWEEPS = 2.0
STALL_DROP = 1e-12
SHIFT_RTOL = 1e-14


def sweep_budget(p: CoupledParams, tol_eps: float | None = None) -> int:
    """
    Decoding waves travel the whole chain, so the budget grows with L. Front
    speed vanishes linearly at the threshold; resolving it to ``tol_eps`` needs
    about FRONT_SWEEPS / tol_eps sweeps for the front to move one section.
    """
    budget = max(MIN_SWEEP_BUDGET, 200 * p.sections)
    if tol_eps:
        budget = max(budget, int(FRONT_SWEEPS / tol_eps))
    return budget


@dataclasses.dataclass(frozen=True, eq=False)
class Constellation:
    x1: np.ndarray
    x2: np.ndarray

    def __post_init__(self):
        x1 = np.array(self.x1, dtype=float)
        x2 = np.array(self.x2, dtype=float)
        if x1.ndim != 1 or x1.shape != x2.shape or len(x1) % 2 == 0:
            raise ParameterError(f"constellation needs two arrays of equal odd length, got {x1.shape} and {x2.shape}")
        if np.any((x1 < 0) | (x1 > 1)) or np.any((x2 < 0) | (x2 > 1)):
            raise ParameterError("constellation entries must lie in [0, 1]")
        x1.flags.writeable = False
        x2.flags.writeable = False
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "x2", x2)

    @classmethod
    def filled(cls, L: int, value: float) -> "Constellation":
        x = np.full(2 * L + 1, value, dtype=float)
        return cls(x, x.copy())

    @classmethod
    def erased(cls, L: int) -> "Constellation":
        return cls.filled(L, 1.0)

    @property
    def L(self) -> int:
        return (len(self.x1) - 1) // 2

    @property
    def positions(self) -> np.ndarray:
        return np.arange(-self.L, self.L + 1)

    def section(self, i: int) -> tuple[float, float]:
        if not -self.L <= i <= self.L:
            return 0.0, 0.0
        return float(self.x1[i + self.L]), float(self.x2[i + self.L])

    def distance(self, other: "Constellation") -> float:
        return float(max(np.max(np.abs(self.x1 - other.x1)), np.max(np.abs(self.x2 - other.x2))))

    @property
    def max(self) -> float:
        return float(max(self.x1.max(), self.x2.max()))

    def rows(self) -> Iterator[tuple[int, float, float]]:
        for i, a, b in zip(self.positions, self.x1, self.x2):
            yield int(i), float(a), float(b)


@dataclasses.dataclass(frozen=True, eq=False)
class DEFixedPoint:
    eps: float
    constellation: Constellation
    residual: float
    sweeps: int = 0


class ScheduleKind(str, enum.Enum):
    PARALLEL = "parallel"
    RANDOM_ADMISSIBLE = "random"
    ROUND_ROBIN_SUBSETS = "round-robin"


@dataclasses.dataclass(frozen=True)
class Schedule:
    """
    Order in which sections are updated within one sweep. ``partition`` holds
    section indices (-L..L) for round-robin schedules.
    """

    kind: ScheduleKind = ScheduleKind.PARALLEL
    seed: int = 0
    partition: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def parallel(cls) -> "Schedule":
        return cls(ScheduleKind.PARALLEL)

    @classmethod
    def random_admissible(cls, seed: int) -> "Schedule":
        return cls(ScheduleKind.RANDOM_ADMISSIBLE, seed=seed)

    @classmethod
    def round_robin(cls, partition: Iterable[Iterable[int]]) -> "Schedule":
        return cls(ScheduleKind.ROUND_ROBIN_SUBSETS, partition=tuple(tuple(block) for block in partition))

    def check(self, L: int):
        """Every section must be updated at least once per sweep."""
        if self.kind != ScheduleKind.ROUND_ROBIN_SUBSETS:
            return
        covered = {i for block in self.partition for i in block}
        outside = sorted(i for i in covered if not -L <= i <= L)
        missing = sorted(set(range(-L, L + 1)) - covered)
        if outside or missing:
            raise ParameterError(
                "round-robin partition must cover exactly the sections -L..L",
                details={"missing": missing, "outside": outside},
            )


class WindowSide(str, enum.Enum):
    CHECK = "check"
    VARIABLE = "variable"


def _padded(x: np.ndarray, start: int, stop: int) -> np.ndarray:
    """x[start:stop] with zeros wherever the slice leaves the chain."""
    out = np.zeros(stop - start)
    lo, hi = max(start, 0), min(stop, len(x))
    if lo < hi:
        out[lo - start : hi - start] = x[lo:hi]
    return out


def _window_sum(values: np.ndarray, w: int) -> np.ndarray:
    return np.convolve(values, np.ones(w), mode="valid")


def variable_averages(x: np.ndarray, r: int, w: int, lo: int, hi: int) -> np.ndarray:
    """
    Variable-side window averages of y for array indices lo..hi-1. The y values
    at positions past the chain are built from zero-padded x windows.
    """
    seg = _padded(x, lo - (w - 1), hi + (w - 1))
    x_avg = _window_sum(seg, w) / w
    y = 1.0 - (1.0 - x_avg) ** (r - 1)
    return _window_sum(y, w) / w


def _update(
    x1: np.ndarray, x2: np.ndarray, eps: float, p: CoupledParams, lo: int = 0, hi: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Updated x of both users for array indices lo..hi-1, read from the current x."""
    d = p.degrees
    hi = len(x1) if hi is None else hi
    yb1 = variable_averages(x1, d.r1, p.w, lo, hi)
    yb2 = variable_averages(x2, d.r2, p.w, lo, hi)
    new1 = effective_erasure(eps, yb2**d.l2) * yb1 ** (d.l1 - 1)
    new2 = effective_erasure(eps, yb1**d.l1) * yb2 ** (d.l2 - 1)
    return new1, new2


def window_average(x: Sequence[float], i: int, side: WindowSide, w: int, r: int | None = None) -> float:
    """
    Window average entering the coupled update at section i of a constellation field x
    (indexed -L..L). The check side averages x over i-w+1..i; the variable side
    averages y = 1 - (1 - check-side average)^(r-1) over i..i+w-1 and needs the
    check degree r.
    """
    x = np.asarray(x, dtype=float)
    L = (len(x) - 1) // 2
    if not -L <= i <= L:
        raise ParameterError(f"section {i} outside [-{L}, {L}]")
    k = i + L
    if WindowSide(side) == WindowSide.CHECK:
        return float(_padded(x, k - w + 1, k + 1).sum() / w)
    if r is None:
        raise ParameterError("variable-side averages need the check degree r")
    return float(variable_averages(x, r, w, k, k + 1)[0])


def coupled_step(
    c: Constellation, eps: float, p: CoupledParams, sections: Iterable[int] | None = None
) -> Constellation:
    """
    Apply the coupled update of both users to the given sections (all when None). Every update reads the
    pre-step constellation; other sections keep their values.
    """
    if c.L != p.L:
        raise ParameterError(f"constellation has L={c.L}, parameters have L={p.L}")
    new1, new2 = _update(np.asarray(c.x1), np.asarray(c.x2), eps, p)
    if sections is None:
        return Constellation(new1, new2)

    idx = np.array(sorted(set(sections)), dtype=int)
    if idx.size and (idx.min() < -p.L or idx.max() > p.L):
        raise ParameterError(f"sections must lie in [-{p.L}, {p.L}]")
    x1, x2 = np.array(c.x1), np.array(c.x2)
    x1[idx + p.L] = new1[idx + p.L]
    x2[idx + p.L] = new2[idx + p.L]
    return Constellation(x1, x2)


def fp_residual(c: Constellation, eps: float, p: CoupledParams) -> float:
    """Largest violation of the coupled fixed-point equations over all sections and both users."""
    new1, new2 = _update(np.asarray(c.x1), np.asarray(c.x2), eps, p)
    return float(max(np.max(np.abs(new1 - c.x1)), np.max(np.abs(new2 - c.x2))))


def constellation_entropy(c: Constellation) -> float:
    return float(np.mean(c.x1))


def is_nontrivial(fp: DEFixedPoint, floor: float = DECODED) -> bool:
    return fp.constellation.max >= floor


def _sweeps(x1: np.ndarray, x2: np.ndarray, eps: float, p: CoupledParams, sched: Schedule) -> Iterator[float]:
    """
    Run sweeps in place on x1, x2 and yield the largest change of each sweep.
    Sequential schedules read the most recent values of the neighbours.
    """
    n = len(x1)
    rng = np.random.default_rng(sched.seed)
    blocks = [np.array(block, dtype=int) + p.L for block in sched.partition]
    while True:
        if sched.kind == ScheduleKind.PARALLEL:
            new1, new2 = _update(x1, x2, eps, p)
            change = max(np.max(np.abs(new1 - x1)), np.max(np.abs(new2 - x2)))
            x1[:], x2[:] = new1, new2
        elif sched.kind == ScheduleKind.RANDOM_ADMISSIBLE:
            change = 0.0
            for k in rng.permutation(n):
                new1, new2 = _update(x1, x2, eps, p, k, k + 1)
                change = max(change, abs(new1[0] - x1[k]), abs(new2[0] - x2[k]))
                x1[k], x2[k] = new1[0], new2[0]
        else:
            change = 0.0
            for block in blocks:
                new1, new2 = _update(x1, x2, eps, p)
                change = max(change, np.max(np.abs(new1[block] - x1[block])), np.max(np.abs(new2[block] - x2[block])))
                x1[block], x2[block] = new1[block], new2[block]
        yield float(change)


def iterate_forward_de(
    eps: float, p: CoupledParams, sched: Schedule | None = None, start: Constellation | None = None
) -> Iterator[Constellation]:
    """Endless sequence of constellations after each sweep, from all-erased by default."""
    sched = sched or Schedule.parallel()
    sched.check(p.L)
    start = start or Constellation.erased(p.L)
    x1, x2 = np.array(start.x1), np.array(start.x2)
    for _ in _sweeps(x1, x2, eps, p, sched):
        yield Constellation(x1, x2)


def forward_de(
    eps: float,
    p: CoupledParams,
    sched: Schedule | None = None,
    tol: float = DEFAULT_TOL,
    max_sweeps: int | None = None,
    on_sweep: Callable[[int, float], None] | None = None,
) -> DEFixedPoint:
    """
    Forward DE from the all-erased constellation until a full sweep changes no
    entry by more than ``tol``.
    """
    require_valid(p)
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"eps={eps} must lie in [0, 1]")
    sched = sched or Schedule.parallel()
    sched.check(p.L)
    max_sweeps = max_sweeps or sweep_budget(p)

    x1, x2 = np.ones(p.sections), np.ones(p.sections)
    for sweep, change in enumerate(_sweeps(x1, x2, eps, p, sched), start=1):
        if on_sweep:
            on_sweep(sweep, change)
        if change < tol:
            c = Constellation(x1, x2)
            logging.debug(f"forward DE {p} at eps={eps} ({sched.kind.value}) settled after {sweep} sweeps")
            return DEFixedPoint(eps, c, fp_residual(c, eps, p), sweep)
        if sweep >= max_sweeps:
            raise ConvergenceError(
                f"forward DE {p} at eps={eps} did not settle in {max_sweeps} sweeps",
                details={"eps": eps, "last_change": change},
            )


def _boundary_decoded(x1: np.ndarray, x2: np.ndarray, w: int) -> bool:
    """The first w-1 sections of both users are exactly zero."""
    return not (x1[: w - 1].any() or x2[: w - 1].any())


def front_advanced(x1: np.ndarray, x2: np.ndarray, ref1: np.ndarray, ref2: np.ndarray) -> bool:
    """
    Whether the constellation lies below the reference shifted one section
    towards +L (with zero shifted in at -L).

    The update is monotone and translation invariant, so once this holds for a
    reference whose first w-1 sections are zero it holds again one step later
    for the updated pair. The constellation then falls below every shift of the
    reference and forward DE decodes.
    """
    lim = 1.0 + SHIFT_RTOL
    return bool(
        x1[0] == 0.0
        and x2[0] == 0.0
        and np.all(x1[1:] <= ref1[:-1] * lim)
        and np.all(x2[1:] <= ref2[:-1] * lim)
    )


def decodes_coupled(eps: float, p: CoupledParams, max_sweeps: int | None = None) -> bool:
    """
    Parallel forward DE reaches the all-zero constellation.

    Decoding is declared as soon as every entry is below the decoding floor or
    the decoding front has moved one section past a snapshot taken once the
    chain end is decoded. Failure needs the constellation to stall: no entry
    moves by the convergence tolerance for (2L+1)*w consecutive sweeps and the
    summed x drops by less than STALL_DROP per section over that window.
    """
    max_sweeps = max_sweeps or sweep_budget(p)
    stall_window = p.sections * p.w
    x1, x2 = np.ones(p.sections), np.ones(p.sections)
    ref = None
    stalled, level = 0, 0.0
    for sweep, change in enumerate(_sweeps(x1, x2, eps, p, Schedule.parallel()), start=1):
        if x1.max() < DECODED and x2.max() < DECODED:
            logging.debug(f"{p} decodes at eps={eps} after {sweep} sweeps")
            return True
        if ref is None:
            if _boundary_decoded(x1, x2, p.w):
                ref = (x1.copy(), x2.copy())
        elif front_advanced(x1, x2, *ref):
            logging.debug(f"{p} at eps={eps}: decoding front moved a section after {sweep} sweeps")
            return True

        if change == 0.0:
            return False
        if change < DEFAULT_TOL:
            if stalled == 0:
                level = x1.sum() + x2.sum()
            stalled += 1
            if stalled >= stall_window:
                if level - (x1.sum() + x2.sum()) < STALL_DROP * p.sections:
                    logging.debug(f"{p} stuck at eps={eps} after {sweep} sweeps")
                    return False
                stalled = 0
        else:
            stalled = 0

        if sweep >= max_sweeps:
            logging.warning(f"forward DE {p} at eps={eps} exhausted {max_sweeps} sweeps, counted as failure")
            return False


def bp_threshold_coupled(p: CoupledParams, tol_eps: float = DEFAULT_TOL_EPS) -> float:
    require_valid(p)
    budget = sweep_budget(p, tol_eps)
    eps = bisect_threshold(lambda e: decodes_coupled(e, p, budget), tol_eps, f"coupled {p}")
    logging.info(f"coupled BP threshold of {p}: {eps:.6f}")
    return eps
