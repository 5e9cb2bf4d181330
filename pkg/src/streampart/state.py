from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

UNASSIGNED = -1


def compute_l_max(total_weight: int, k: int, epsilon: float) -> int:
    """ceil((1 + epsilon) * total_weight / k), evaluated exactly.

    ``epsilon`` is read through its decimal repr so 0.03 means 3/100, not the
    nearest double, which would push exact quotients one unit up.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    bound = (1 + Fraction(repr(float(epsilon)))) * total_weight / k
    return math.ceil(bound)


@dataclass
class PartitionState:
    """Block assignment plus incrementally maintained block weights."""

    k: int
    epsilon: float
    l_max: int
    node_weights: list[int]
    block: list[int]
    block_weight: list[int]
    forced: list[int] = field(default_factory=list)

    @classmethod
    def for_graph(cls, g, k: int, epsilon: float = 0.03) -> "PartitionState":
        return cls.empty(g.node_weights, k, epsilon)

    @classmethod
    def empty(cls, node_weights: list[int], k: int, epsilon: float = 0.03) -> "PartitionState":
        l_max = compute_l_max(sum(node_weights), k, epsilon)
        return cls(k, epsilon, l_max, node_weights, [UNASSIGNED] * len(node_weights), [0] * k)

    @classmethod
    def from_blocks(cls, node_weights, blocks, k: int, epsilon: float = 0.03) -> "PartitionState":
        st = cls.empty(list(node_weights), k, epsilon)
        for v, b in enumerate(blocks):
            if b != UNASSIGNED:
                st.assign(v, int(b))
        return st

    @property
    def n(self) -> int:
        return len(self.block)

    def assign(self, v: int, b: int) -> None:
        if self.block[v] != UNASSIGNED:
            raise ValueError(f"node {v} already assigned to block {self.block[v]}")
        if not 0 <= b < self.k:
            raise ValueError(f"block {b} out of range for k={self.k}")
        self.block[v] = b
        self.block_weight[b] += self.node_weights[v]

    def unassign(self, v: int) -> int:
        b = self.block[v]
        if b == UNASSIGNED:
            raise ValueError(f"node {v} is not assigned")
        self.block[v] = UNASSIGNED
        self.block_weight[b] -= self.node_weights[v]
        return b

    def is_complete(self) -> bool:
        return UNASSIGNED not in self.block

    def unassigned_nodes(self) -> list[int]:
        return [v for v, b in enumerate(self.block) if b == UNASSIGNED]

    def recompute_block_weights(self) -> list[int]:
        w = [0] * self.k
        for v, b in enumerate(self.block):
            if b != UNASSIGNED:
                w[b] += self.node_weights[v]
        return w

    def max_block_weight(self) -> int:
        return max(self.block_weight, default=0)

    def copy(self) -> "PartitionState":
        return PartitionState(
            self.k, self.epsilon, self.l_max, self.node_weights,
            list(self.block), list(self.block_weight), list(self.forced),
        )
