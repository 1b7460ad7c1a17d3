"""
Value-level oracles for small instances: actual codewords, adder-channel
outputs and a decoder that works on bit values instead of channel states.
Also a one-resolution-at-a-time peeler in random order.
"""

import numpy as np

from scmac.simulation.channel_state import ERASED_OUTPUT, ChannelState, ChannelStateVector
from scmac.simulation.graph import CoupledTannerGraph, UserGraph

UNKNOWN = -1


def parity_check_matrix(graph: UserGraph) -> np.ndarray:
    """Dense GF(2) parity-check matrix; a double edge cancels."""
    H = np.zeros((graph.n_checks, graph.n_vars), dtype=np.uint8)
    for v, checks in enumerate(graph.var_checks):
        for c in checks:
            H[c, v] ^= 1
    return H


def nullspace_gf2(H: np.ndarray) -> np.ndarray:
    """Basis of {x : Hx = 0 over GF(2)}, one basis vector per row."""
    A = H.copy() % 2
    rows, cols = A.shape
    pivots = []
    row = 0
    for col in range(cols):
        hits = np.flatnonzero(A[row:, col]) if row < rows else []
        if len(hits) == 0:
            continue
        pivot = row + hits[0]
        A[[row, pivot]] = A[[pivot, row]]
        for other in np.flatnonzero(A[:, col]):
            if other != row:
                A[other] ^= A[row]
        pivots.append(col)
        row += 1
        if row == rows:
            break

    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = A[r, f]
    return basis


def random_codeword(graph: UserGraph, rng: np.random.Generator) -> np.ndarray:
    basis = nullspace_gf2(parity_check_matrix(graph))
    if basis.shape[0] == 0:
        return np.zeros(graph.n_vars, dtype=np.uint8)
    coeffs = rng.integers(0, 2, size=basis.shape[0], dtype=np.uint8)
    return (coeffs @ basis % 2).astype(np.uint8)


def adder_output(x1: np.ndarray, x2: np.ndarray, eps: float, rng: np.random.Generator) -> np.ndarray:
    """Y = X1 + X2, replaced by ERASED_OUTPUT with probability eps."""
    y = x1.astype(np.int64) + x2.astype(np.int64)
    y[rng.random(len(y)) < eps] = ERASED_OUTPUT
    return y


def value_decode(g: CoupledTannerGraph, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Iterative decoding on values: Y in {0, 2} fixes both bits, Y = 1 with one bit
    known fixes the other, a check with one unknown socket fixes it to the
    parity of its known sockets. Returns bit values with UNKNOWN where unresolved.
    """
    values = [np.full(g.N, UNKNOWN, dtype=np.int64) for _ in range(2)]
    for v in range(g.N):
        if y[v] in (0, 2):
            values[0][v] = values[1][v] = y[v] // 2

    check_sockets = []
    for graph in (g.user1, g.user2):
        sockets = [[] for _ in range(graph.n_checks)]
        for v, checks in enumerate(graph.var_checks):
            for c in checks:
                sockets[c].append(v)
        check_sockets.append(sockets)

    changed = True
    while changed:
        changed = False
        for v in np.flatnonzero(y == 1):
            a, b = values[0][v], values[1][v]
            if (a == UNKNOWN) != (b == UNKNOWN):
                values[0][v], values[1][v] = (1 - b, b) if a == UNKNOWN else (a, 1 - a)
                changed = True
        for u in range(2):
            for sockets in check_sockets[u]:
                unknown = [v for v in sockets if values[u][v] == UNKNOWN]
                if len(unknown) == 1:
                    values[u][unknown[0]] = sum(values[u][v] for v in sockets if v != unknown[0]) % 2
                    changed = True
    return values[0], values[1]


def queue_peel(g: CoupledTannerGraph, s: ChannelStateVector, seed) -> tuple[np.ndarray, np.ndarray]:
    """
    Erasure peeling that applies one resolution at a time, picked uniformly
    among those available. Returns the final unknown masks of both users.
    """
    rng = np.random.default_rng(seed)
    known = [s.mask(ChannelState.REVEALED).copy() for _ in range(2)]
    linked = s.mask(ChannelState.LINKED)
    graphs = (g.user1, g.user2)

    while True:
        options = []
        for u in range(2):
            other = known[1 - u]
            options.extend((u, int(v)) for v in np.flatnonzero(linked & other & ~known[u]))
            graph = graphs[u]
            unknown_sockets = graph.var_checks[~known[u]]
            owners = np.repeat(np.flatnonzero(~known[u]), graph.l)
            counts = np.bincount(unknown_sockets.ravel(), minlength=graph.n_checks)
            for c in np.flatnonzero(counts == 1):
                options.append((u, int(owners[unknown_sockets.ravel() == c][0])))
        if not options:
            break
        u, v = options[rng.integers(len(options))]
        known[u][v] = True

    return ~known[0], ~known[1]
