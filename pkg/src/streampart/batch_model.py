"""Batch model graph: the batch-induced subgraph plus one pinned node per block."""

from __future__ import annotations

from dataclasses import dataclass, field

from .state import UNASSIGNED, PartitionState


@dataclass
class Batch:
    """Deferred nodes awaiting joint assignment, in eviction order."""

    capacity: int
    members: list[int] = field(default_factory=list)
    member_set: set[int] = field(default_factory=set)

    def add(self, v: int) -> None:
        if v in self.member_set:
            raise ValueError(f"node {v} already in batch")
        if len(self.members) >= self.capacity:
            raise ValueError("batch is full")
        self.members.append(v)
        self.member_set.add(v)

    def __len__(self) -> int:
        return len(self.members)

    def is_full(self) -> bool:
        return len(self.members) >= self.capacity

    def clear(self) -> None:
        self.members = []
        self.member_set = set()

    @classmethod
    def of(cls, members, capacity: int | None = None) -> "Batch":
        b = cls(capacity if capacity is not None else max(len(members), 1))
        for v in members:
            b.add(v)
        return b


@dataclass
class ModelGraph:
    """Weighted graph whose last ``k`` nodes are pinned: node ``n_regular + i`` is fixed to block ``i``."""

    adj: list[list[int]]
    wgt: list[list[int]]
    node_weight: list[int]
    k: int

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def n_regular(self) -> int:
        return len(self.adj) - self.k

    def aux(self, i: int) -> int:
        return self.n_regular + i

    def total_weight(self) -> int:
        return sum(self.node_weight)

    def edge_weight(self) -> int:
        return sum(sum(ws) for ws in self.wgt) // 2

    def cut(self, assignment) -> int:
        cut = 0
        for v in range(len(self.adj)):
            bv = assignment[v]
            for u, w in zip(self.adj[v], self.wgt[v]):
                if u > v and assignment[u] != bv:
                    cut += w
        return cut

    def block_weights(self, assignment) -> list[int]:
        bw = [0] * self.k
        for v, b in enumerate(assignment):
            bw[b] += self.node_weight[v]
        return bw

    def pinned_assignment_ok(self, assignment) -> bool:
        base = self.n_regular
        return all(assignment[base + i] == i for i in range(self.k))


@dataclass
class BatchModelGraph:
    graph: ModelGraph
    local_to_global: list[int]
    global_to_local: dict[int, int]

    @property
    def k(self) -> int:
        return self.graph.k

    @property
    def n_regular(self) -> int:
        return self.graph.n_regular


def build_batch_model(g, batch, state: PartitionState) -> BatchModelGraph:
    """Induced batch edges keep their weights; edges to assigned nodes collapse
    onto the auxiliary node of their block; edges to unassigned non-members are dropped.
    Auxiliary node ``i`` weighs the current global weight of block ``i``.
    """
    members = batch.members if isinstance(batch, Batch) else list(batch)
    if not members:
        raise ValueError("empty batch")
    k = state.k
    block = state.block
    nb = len(members)
    g2l: dict[int, int] = {}
    for i, v in enumerate(members):
        if block[v] != UNASSIGNED:
            raise ValueError(f"batch member {v} is already assigned to block {block[v]}")
        if v in g2l:
            raise ValueError(f"duplicate batch member {v}")
        g2l[v] = i

    adj: list[list[int]] = [[] for _ in range(nb + k)]
    wgt: list[list[int]] = [[] for _ in range(nb + k)]
    gadj, gadj_w = g.adj, g.adj_w
    for i, v in enumerate(members):
        a_i, w_i = adj[i], wgt[i]
        to_block: dict[int, int] = {}
        for u, w in zip(gadj[v], gadj_w[v]):
            j = g2l.get(u)
            if j is not None:
                a_i.append(j)
                w_i.append(w)
            else:
                b = block[u]
                if b != UNASSIGNED:
                    to_block[b] = to_block.get(b, 0) + w
        for b in sorted(to_block):
            w = to_block[b]
            a_i.append(nb + b)
            w_i.append(w)
            adj[nb + b].append(i)
            wgt[nb + b].append(w)

    nw = g.node_weights
    node_weight = [nw[v] for v in members] + list(state.block_weight)
    return BatchModelGraph(ModelGraph(adj, wgt, node_weight, k), list(members), g2l)


def commit_batch(model: BatchModelGraph, local_assignment, state: PartitionState) -> list[tuple[int, int]]:
    """Write regular-node blocks back to the global state; return ``(node, block)`` pairs."""
    nb = model.n_regular
    k = model.k
    if len(local_assignment) == nb + k:
        for i in range(k):
            if local_assignment[nb + i] != i:
                raise ValueError(f"auxiliary node a_{i} not pinned to block {i}")
    elif len(local_assignment) != nb:
        raise ValueError(f"local assignment covers {len(local_assignment)} nodes, model has {nb} regular nodes")
    added = [0] * k
    nw = state.node_weights
    for i, v in enumerate(model.local_to_global):
        added[local_assignment[i]] += nw[v]
    over = [b for b in range(k) if added[b] and state.block_weight[b] + added[b] > state.l_max]
    if over:
        raise RuntimeError(f"commit would exceed l_max={state.l_max} in blocks {over}")
    committed = []
    for i, v in enumerate(model.local_to_global):
        b = int(local_assignment[i])
        state.assign(v, b)
        committed.append((v, b))
    return committed
