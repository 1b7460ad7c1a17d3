"""
Joint erasure peeling over the two users' Tanner graphs and the MAC function
nodes. Only known/unknown states are tracked; progress of erasure decoding does
not depend on bit values.
"""

import dataclasses

import numpy as np

from scmac.simulation.channel_state import ChannelState, ChannelStateVector
from scmac.simulation.graph import CoupledTannerGraph, UserGraph
from scmac.util.error import ParameterError


@dataclasses.dataclass(frozen=True, eq=False)
class DecodeResult:
    success: bool
    residual_fraction_user1: float
    residual_fraction_user2: float
    iterations: int
    unknown1: np.ndarray | None = dataclasses.field(repr=False, default=None)
    unknown2: np.ndarray | None = dataclasses.field(repr=False, default=None)


class _Peeler:
    """
    Per-user peeling bookkeeping: for every check the number of sockets whose
    variable is still unknown and the sum of those variable ids. A check with
    exactly one unknown socket names that variable through the sum.
    """

    def __init__(self, graph: UserGraph, known: np.ndarray):
        self.graph = graph
        self.known = known.copy()
        unknown = np.flatnonzero(~self.known)
        ids = graph.var_checks[unknown].ravel()
        self.count = np.bincount(ids, minlength=graph.n_checks).astype(np.int64)
        self.sum = np.rint(
            np.bincount(ids, weights=np.repeat(unknown, graph.l).astype(float), minlength=graph.n_checks)
        ).astype(np.int64)

    def reveal(self, variables: np.ndarray) -> int:
        variables = variables[~self.known[variables]]
        if variables.size == 0:
            return 0
        self.known[variables] = True
        ids = self.graph.var_checks[variables].ravel()
        n = self.graph.n_checks
        self.count -= np.bincount(ids, minlength=n)
        self.sum -= np.rint(
            np.bincount(ids, weights=np.repeat(variables, self.graph.l).astype(float), minlength=n)
        ).astype(np.int64)
        return int(variables.size)

    def resolvable(self) -> np.ndarray:
        """Variables named by checks with exactly one unknown socket."""
        return np.unique(self.sum[self.count == 1])


def peel_decode(g: CoupledTannerGraph, s: ChannelStateVector, max_rounds: int | None = None) -> DecodeResult:
    """
    Decode one block. Each round passes the MAC function nodes' knowledge to the
    variables (a linked position with one bit known reveals the other), then runs
    one parallel peeling round in both users' graphs. Stops when a round makes no
    progress, when everything is known, or after ``max_rounds``.
    """
    if s.N != g.N:
        raise ParameterError(f"channel has {s.N} positions, graph has {g.N} variables")

    revealed = s.mask(ChannelState.REVEALED)
    linked = s.mask(ChannelState.LINKED)
    peelers = (_Peeler(g.user1, revealed), _Peeler(g.user2, revealed))
    p1, p2 = peelers

    rounds = 0
    while True:
        rounds += 1
        to1 = np.flatnonzero(linked & p2.known & ~p1.known)
        to2 = np.flatnonzero(linked & p1.known & ~p2.known)
        progress = p1.reveal(to1) + p2.reveal(to2)
        for peeler in peelers:
            progress += peeler.reveal(peeler.resolvable())

        done = p1.known.all() and p2.known.all()
        if done or progress == 0 or (max_rounds is not None and rounds >= max_rounds):
            break

    unknown1, unknown2 = ~p1.known, ~p2.known
    residual1, residual2 = float(unknown1.mean()), float(unknown2.mean())
    return DecodeResult(
        success=residual1 == 0.0 and residual2 == 0.0,
        residual_fraction_user1=residual1,
        residual_fraction_user2=residual2,
        iterations=rounds,
        unknown1=unknown1,
        unknown2=unknown2,
    )
