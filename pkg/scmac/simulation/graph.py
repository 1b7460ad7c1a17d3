"""
Finite coupled Tanner graphs of the (l, r, L, w) ensemble, one per user.

Variable node v sits at section v // M - L. Check positions run from -L to
L + w - 1 (array index j + L) with l*M/r check nodes each.
"""

import dataclasses
import logging

import numpy as np

from scmac.analysis.ensemble import CoupledParams, require_valid
from scmac.util.error import ParameterError


@dataclasses.dataclass(frozen=True, eq=False)
class UserGraph:
    l: int
    r: int
    L: int
    w: int
    M: int
    var_checks: np.ndarray  # (N, l) check id per variable socket
    check_degree: np.ndarray  # sockets per check, multi-edges counted per socket

    @property
    def n_vars(self) -> int:
        return self.var_checks.shape[0]

    @property
    def checks_per_position(self) -> int:
        return self.l * self.M // self.r

    @property
    def n_checks(self) -> int:
        return len(self.check_degree)

    def check_position(self, check: np.ndarray | int):
        """Section index (-L..L+w-1) of a check id."""
        return np.asarray(check) // self.checks_per_position - self.L

    def var_position(self, var: np.ndarray | int):
        return np.asarray(var) // self.M - self.L

    def degrees_at(self, j: int) -> np.ndarray:
        """Degrees of the checks at position j."""
        k = (j + self.L) * self.checks_per_position
        return self.check_degree[k : k + self.checks_per_position]


@dataclasses.dataclass(frozen=True, eq=False)
class CoupledTannerGraph:
    user1: UserGraph
    user2: UserGraph

    @property
    def N(self) -> int:
        return self.user1.n_vars

    @property
    def M(self) -> int:
        return self.user1.M

    @property
    def L(self) -> int:
        return self.user1.L

    def user(self, u: int) -> UserGraph:
        return self.user1 if u == 1 else self.user2


def check_divisibility(p: CoupledParams, M: int):
    violations = []
    if M < 1:
        violations.append(f"M={M} must be at least 1")
    for u in (1, 2):
        l, r = p.degrees.user(u)
        if (l * M) % r:
            violations.append(f"user {u}: l*M={l * M} not divisible by r={r}")
        if (l * M) % p.w:
            violations.append(f"user {u}: l*M={l * M} not divisible by w={p.w}")
    if violations:
        raise ParameterError("graph size violates socket counts: " + "; ".join(violations), details=violations)


def _sample_user(l: int, r: int, L: int, w: int, M: int, rng: np.random.Generator) -> UserGraph:
    n_pos = 2 * L + 1
    n_check_pos = 2 * L + w
    sockets = l * M
    per_check_pos = sockets // r

    # balanced offsets, shuffled within each section: every socket's offset is uniform on 0..w-1
    offsets = np.tile(np.repeat(np.arange(w), sockets // w), (n_pos, 1))
    offsets = rng.permuted(offsets, axis=1)
    check_pos = (offsets + np.arange(n_pos)[:, None]).ravel()

    # group sockets by target position in random order, then drop them into a random permutation of the slots
    order = np.lexsort((rng.random(check_pos.size), check_pos))
    counts = np.bincount(check_pos, minlength=n_check_pos)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    rank = np.empty(check_pos.size, dtype=np.int64)
    rank[order] = np.arange(check_pos.size) - starts[check_pos[order]]

    slots = rng.permuted(np.tile(np.arange(sockets), (n_check_pos, 1)), axis=1)
    local = slots[check_pos, rank] // r
    check_ids = check_pos * per_check_pos + local

    return UserGraph(
        l=l,
        r=r,
        L=L,
        w=w,
        M=M,
        var_checks=check_ids.reshape(n_pos * M, l),
        check_degree=np.bincount(check_ids, minlength=n_check_pos * per_check_pos),
    )


def sample_graph(p: CoupledParams, M: int, seed: int | np.random.SeedSequence) -> CoupledTannerGraph:
    """
    Sample both users' coupled graphs. Each variable socket lands on a check
    position i..i+w-1 and arriving sockets are matched to check sockets by a
    uniformly random permutation; boundary checks keep their reduced degree.
    """
    require_valid(p)
    check_divisibility(p, M)
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    # children derived without spawn() so the same seed object always gives the same graph
    rng1, rng2 = (np.random.default_rng(np.random.SeedSequence(seed.entropy, spawn_key=(*seed.spawn_key, k))) for k in (0, 1))
    d = p.degrees
    graph = CoupledTannerGraph(
        _sample_user(d.l1, d.r1, p.L, p.w, M, rng1),
        _sample_user(d.l2, d.r2, p.L, p.w, M, rng2),
    )
    logging.debug(f"sampled graph {p} with M={M}: N={graph.N}")
    return graph
