"""
Block error rate versus channel erasure probability for finite coupled graphs.

Trial t of every eps uses the same derived graph and channel seeds, so the
erasure patterns are nested in eps and the block error counts are monotone.
"""

import dataclasses
import logging
from collections.abc import Sequence

import numpy as np
from joblib import Parallel, delayed

from scmac.analysis.channel import ChannelErasure
from scmac.analysis.ensemble import CoupledParams, require_valid
from scmac.simulation.channel_state import sample_channel
from scmac.simulation.decoder import peel_decode
from scmac.simulation.graph import check_divisibility, sample_graph
from scmac.util.error import ParameterError


@dataclasses.dataclass(frozen=True, eq=False)
class SweepRow:
    eps: float
    trials: int
    block_errors: int
    block_error_rate: float
    mean_residual_u1: float
    mean_residual_u2: float
    mean_rounds: float
    profile_u1: np.ndarray = dataclasses.field(repr=False, default=None)  # mean unknown fraction per section
    profile_u2: np.ndarray = dataclasses.field(repr=False, default=None)


def trial_seeds(seed: int, trial: int) -> tuple[np.random.SeedSequence, np.random.SeedSequence]:
    """Graph and channel seeds of one trial."""
    graph_seed, channel_seed = np.random.SeedSequence(seed, spawn_key=(trial,)).spawn(2)
    return graph_seed, channel_seed


def run_trial(p: CoupledParams, M: int, eps: float, seed: int, trial: int, max_rounds: int | None = None):
    graph_seed, channel_seed = trial_seeds(seed, trial)
    g = sample_graph(p, M, graph_seed)
    s = sample_channel(g.N, eps, channel_seed)
    result = peel_decode(g, s, max_rounds=max_rounds)
    profile1 = result.unknown1.reshape(p.sections, M).mean(axis=1)
    profile2 = result.unknown2.reshape(p.sections, M).mean(axis=1)
    return result.success, result.residual_fraction_user1, result.residual_fraction_user2, result.iterations, profile1, profile2


def sweep_error_rate(
    p: CoupledParams,
    M: int,
    eps_grid: Sequence[float],
    trials: int,
    seed: int,
    jobs: int = 1,
    max_rounds: int | None = None,
) -> list[SweepRow]:
    if trials < 1:
        raise ParameterError(f"trials={trials} must be at least 1")
    if jobs < 1 and jobs != -1:
        raise ParameterError(f"jobs={jobs} must be positive or -1")
    require_valid(p)
    check_divisibility(p, M)
    for eps in eps_grid:
        ChannelErasure(eps)

    tasks = [(eps, t) for eps in eps_grid for t in range(trials)]
    logging.info(f"simulating {p} with M={M}: {len(eps_grid)} eps values x {trials} trials on {jobs} workers")
    outcomes = Parallel(n_jobs=jobs)(delayed(run_trial)(p, M, eps, seed, t, max_rounds) for eps, t in tasks)

    rows = []
    for k, eps in enumerate(eps_grid):
        chunk = outcomes[k * trials : (k + 1) * trials]
        failures = sum(1 for outcome in chunk if not outcome[0])
        row = SweepRow(
            eps=float(eps),
            trials=trials,
            block_errors=failures,
            block_error_rate=failures / trials,
            mean_residual_u1=float(np.mean([outcome[1] for outcome in chunk])),
            mean_residual_u2=float(np.mean([outcome[2] for outcome in chunk])),
            mean_rounds=float(np.mean([outcome[3] for outcome in chunk])),
            profile_u1=np.mean([outcome[4] for outcome in chunk], axis=0),
            profile_u2=np.mean([outcome[5] for outcome in chunk], axis=0),
        )
        logging.debug(f"eps={eps}: {failures}/{trials} block errors")
        rows.append(row)
    return rows
