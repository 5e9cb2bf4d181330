"""One-pass Fennel block selection and the plain streaming baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .graph import stream_nodes
from .state import PartitionState


class InfeasibleError(RuntimeError):
    """No block can take the node without exceeding the capacity bound."""


@dataclass(frozen=True)
class FennelParams:
    alpha: float
    gamma: float = 1.5
    l_max: int = 1

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        if not self.gamma > 1:
            raise ValueError("gamma must be > 1")
        if self.l_max < 0:
            raise ValueError("l_max must be >= 0")

    def penalty(self, c_v: float, block_weight: float) -> float:
        return self.alpha * self.gamma * c_v * block_weight ** (self.gamma - 1.0)


def default_alpha(k: int, total_edge_weight: int, total_node_weight: int, gamma: float = 1.5) -> float:
    """sqrt(k) * w(E) / c(V)^gamma, guarded against empty graphs."""
    return math.sqrt(k) * max(total_edge_weight, 1) / max(total_node_weight, 1) ** gamma


def default_params(g, k: int, l_max: int, alpha: float | None = None, gamma: float = 1.5) -> FennelParams:
    if alpha is None:
        alpha = default_alpha(k, g.total_edge_weight, g.total_node_weight, gamma)
    return FennelParams(alpha, gamma, l_max)


def fennel_select(
    v: int,
    neighbor_blocks: Sequence[float],
    c_v: float,
    block_weight: Sequence[float],
    p: FennelParams,
) -> int:
    """Block maximizing ``gain - alpha*gamma*c_v*w^(gamma-1)`` among blocks that fit.

    Ties go to the lowest block index.
    """
    scale = p.alpha * p.gamma * c_v
    expo = p.gamma - 1.0
    l_max = p.l_max
    best = -1
    best_val = -math.inf
    for i, w in enumerate(block_weight):
        if w + c_v > l_max:
            continue
        val = neighbor_blocks[i] - scale * w ** expo
        if val > best_val:
            best, best_val = i, val
    if best < 0:
        raise InfeasibleError(f"node {v} (weight {c_v}) fits in no block (l_max={l_max})")
    return best


def fennel_pass(g, order, k: int, epsilon: float = 0.03, params: FennelParams | None = None) -> PartitionState:
    """Assign every node on arrival using its already-assigned neighbors."""
    state = PartitionState.for_graph(g, k, epsilon)
    if params is None:
        params = default_params(g, k, state.l_max)
    block, weights = state.block, state.block_weight
    nw = g.node_weights
    for v, nbrs, ws in stream_nodes(g, order):
        conn = [0] * k
        for u, w in zip(nbrs, ws):
            b = block[u]
            if b >= 0:
                conn[b] += w
        state.assign(v, fennel_select(v, conn, nw[v], weights, params))
    return state
