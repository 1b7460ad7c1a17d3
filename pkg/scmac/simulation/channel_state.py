"""
What the adder channel tells the decoder about each transmit position, without
the bit values: both inputs revealed (Y in {0, 2}), inputs linked (Y = 1), or
erased.
"""

import dataclasses
import enum

import numpy as np

from scmac.analysis.channel import ChannelErasure

ERASED_OUTPUT = -1


class ChannelState(enum.IntEnum):
    REVEALED = 0
    LINKED = 1
    ERASED = 2


@dataclasses.dataclass(frozen=True, eq=False)
class ChannelStateVector:
    states: np.ndarray  # int8, one ChannelState per position

    @property
    def N(self) -> int:
        return len(self.states)

    def mask(self, state: ChannelState) -> np.ndarray:
        return self.states == state

    @classmethod
    def from_outputs(cls, y: np.ndarray) -> "ChannelStateVector":
        """Abstract channel outputs Y (ERASED_OUTPUT for '?') into states."""
        y = np.asarray(y)
        states = np.full(y.shape, ChannelState.REVEALED, dtype=np.int8)
        states[y == 1] = ChannelState.LINKED
        states[y == ERASED_OUTPUT] = ChannelState.ERASED
        return cls(states)


def sample_channel(N: int, eps: float, seed) -> ChannelStateVector:
    """
    Independent states with probabilities (1-eps)/2, (1-eps)/2, eps for
    revealed, linked, erased.
    """
    ChannelErasure(eps)
    rng = np.random.default_rng(seed)
    erased = rng.random(N) < eps
    linked = rng.random(N) < 0.5
    states = np.where(erased, ChannelState.ERASED, np.where(linked, ChannelState.LINKED, ChannelState.REVEALED))
    return ChannelStateVector(states.astype(np.int8))
