"""Multilevel k-way partitioning of batch model graphs.

Coarsening uses size-constrained label propagation followed by contraction.
The coarsest graph is partitioned with weighted Fennel (heaviest node first)
and the result is refined by greedy local search on every level on the way
back up.  The ``k`` pinned nodes at the tail of each graph are never merged
and never moved.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .batch_model import BatchModelGraph, ModelGraph
from .fennel import FennelParams, InfeasibleError, fennel_select


@dataclass(frozen=True)
class MultilevelConfig:
    stop_size: int | None = None  # None: max(2k, 2048)
    refine_rounds: int = 3
    cluster_rounds: int = 3
    cluster_factor: int = 16
    min_shrink: float = 0.1

    def resolved_stop_size(self, k: int) -> int:
        return self.stop_size if self.stop_size is not None else max(2 * k, 2048)


@dataclass
class CoarseLevel:
    graph: ModelGraph
    map_down: list[int]  # node of the finer graph -> node of ``graph``
    level_index: int


def _as_graph(model) -> ModelGraph:
    return model.graph if isinstance(model, BatchModelGraph) else model


def label_propagation(graph: ModelGraph, max_cluster_weight: int, rounds: int, rng: random.Random) -> list[int]:
    """Cluster regular nodes; pinned nodes keep singleton clusters."""
    n, nreg = graph.n, graph.n_regular
    adj, wgt, vw = graph.adj, graph.wgt, graph.node_weight
    label = list(range(n))
    cw = list(vw)
    order = list(range(nreg))
    rng.shuffle(order)
    for _ in range(rounds):
        changed = 0
        for v in order:
            cur = label[v]
            cv = vw[v]
            conn: dict[int, int] = {}
            for u, w in zip(adj[v], wgt[v]):
                if u < nreg:
                    lu = label[u]
                    conn[lu] = conn.get(lu, 0) + w
            best, best_w = cur, conn.get(cur, 0)
            for lab, c in conn.items():
                if c > best_w and cw[lab] + cv <= max_cluster_weight:
                    best, best_w = lab, c
            if best != cur:
                cw[cur] -= cv
                cw[best] += cv
                label[v] = best
                changed += 1
        if not changed:
            break
    return label


def contract(graph: ModelGraph, label: list[int]) -> tuple[ModelGraph, list[int]]:
    """Merge clusters; intra-cluster edges vanish, parallel edges add up."""
    n, nreg, k = graph.n, graph.n_regular, graph.k
    new_id: dict[int, int] = {}
    map_down = [0] * n
    for v in range(nreg):
        lab = label[v]
        c = new_id.get(lab)
        if c is None:
            c = new_id[lab] = len(new_id)
        map_down[v] = c
    creg = len(new_id)
    for i in range(k):
        map_down[nreg + i] = creg + i
    cn = creg + k
    node_weight = [0] * cn
    for v in range(n):
        node_weight[map_down[v]] += graph.node_weight[v]
    acc: list[dict[int, int]] = [{} for _ in range(cn)]
    for v in range(n):
        cv = map_down[v]
        row = acc[cv]
        for u, w in zip(graph.adj[v], graph.wgt[v]):
            cu = map_down[u]
            if cu != cv:
                row[cu] = row.get(cu, 0) + w
    adj = [list(row.keys()) for row in acc]
    wgt = [list(row.values()) for row in acc]
    return ModelGraph(adj, wgt, node_weight, k), map_down


def default_cluster_weight(graph: ModelGraph, l_max: int, factor: int) -> int:
    nreg, k = graph.n_regular, graph.k
    vw = graph.node_weight
    heaviest = max(vw[:nreg], default=1)
    residual = sum(max(0, l_max - vw[nreg + i]) for i in range(k))
    return max(heaviest, 1, min(l_max // factor, residual // (2 * k)))


def coarsen(
    model,
    stop_size: int,
    max_cluster_weight: int | None = None,
    rounds: int = 3,
    seed: int = 0,
    min_shrink: float = 0.1,
) -> list[CoarseLevel]:
    """Contract until at most ``stop_size`` nodes remain or a level shrinks by less than ``min_shrink``."""
    graph = _as_graph(model)
    if stop_size < graph.k:
        raise ValueError("stop_size must be >= k")
    if max_cluster_weight is None:
        max_cluster_weight = max(max(graph.node_weight[: graph.n_regular], default=1), 1)
    rng = random.Random(seed)
    levels: list[CoarseLevel] = []
    while graph.n > stop_size:
        label = label_propagation(graph, max_cluster_weight, rounds, rng)
        coarse, map_down = contract(graph, label)
        if coarse.n >= graph.n:
            break
        levels.append(CoarseLevel(coarse, map_down, len(levels) + 1))
        if coarse.n > (1.0 - min_shrink) * graph.n:
            break
        graph = coarse
    return levels


def initial_partition(coarsest, k: int, l_max: int, p: FennelParams) -> list[int]:
    """Pinned nodes go to their blocks; the rest by Fennel, heaviest first (stable)."""
    graph = _as_graph(coarsest)
    if graph.k != k:
        raise ValueError("model k does not match")
    nreg = graph.n_regular
    vw = graph.node_weight
    part = [-1] * graph.n
    bw = [0] * k
    for i in range(k):
        part[nreg + i] = i
        bw[i] += vw[nreg + i]
    if p.l_max != l_max:
        p = FennelParams(p.alpha, p.gamma, l_max)
    for v in sorted(range(nreg), key=lambda x: -vw[x]):
        conn = [0] * k
        for u, w in zip(graph.adj[v], graph.wgt[v]):
            b = part[u]
            if b >= 0:
                conn[b] += w
        b = fennel_select(v, conn, vw[v], bw, p)
        part[v] = b
        bw[b] += vw[v]
    return part


def refine(
    level,
    assignment,
    l_max: int,
    params: FennelParams | None = None,
    rounds: int = 3,
) -> list[int]:
    """Greedy local search over regular nodes.

    A node moves to the feasible block with the largest strictly positive
    cut gain.  With ``params`` a move must also strictly improve the node's
    Fennel objective, so a Fennel-chosen placement is a fixed point.
    Zero-gain moves never happen; the cut never increases.
    """
    graph = level.graph if isinstance(level, (CoarseLevel, BatchModelGraph)) else level
    nreg, k = graph.n_regular, graph.k
    adj, wgt, vw = graph.adj, graph.wgt, graph.node_weight
    part = list(assignment)
    bw = [0] * k
    for v, b in enumerate(part):
        bw[b] += vw[v]
    if params is not None:
        ag = params.alpha * params.gamma
        expo = params.gamma - 1.0
    for _ in range(rounds):
        moved = 0
        for v in range(nreg):
            cur = part[v]
            cv = vw[v]
            conn: dict[int, int] = {}
            for u, w in zip(adj[v], wgt[v]):
                b = part[u]
                conn[b] = conn.get(b, 0) + w
            own = conn.get(cur, 0)
            if params is not None:
                scale = ag * cv
                stay = own - scale * (bw[cur] - cv) ** expo
            best, best_gain = -1, 0
            for b, c in conn.items():
                gain = c - own
                if gain <= 0 or b == cur or bw[b] + cv > l_max:
                    continue
                if params is not None and c - scale * bw[b] ** expo <= stay:
                    continue
                if gain > best_gain or (gain == best_gain and b < best):
                    best, best_gain = b, gain
            if best >= 0:
                part[v] = best
                bw[cur] -= cv
                bw[best] += cv
                moved += 1
        if not moved:
            break
    return part


def ml_partition(
    model,
    k: int,
    l_max: int,
    p: FennelParams,
    config: MultilevelConfig | None = None,
    seed: int = 0,
) -> list[int]:
    """Coarsen, partition the coarsest graph, then project and refine level by level.

    Returns one block per model node (pinned nodes included).  Raises
    ``InfeasibleError`` when the coarsest graph cannot be packed under ``l_max``.
    """
    cfg = config or MultilevelConfig()
    graph = _as_graph(model)
    if p.l_max != l_max:
        p = FennelParams(p.alpha, p.gamma, l_max)
    cap = default_cluster_weight(graph, l_max, cfg.cluster_factor)
    levels = coarsen(
        graph, cfg.resolved_stop_size(k), cap, cfg.cluster_rounds, seed, cfg.min_shrink
    )
    graphs = [graph] + [lvl.graph for lvl in levels]
    part = initial_partition(graphs[-1], k, l_max, p)
    part = refine(graphs[-1], part, l_max, p, cfg.refine_rounds)
    for idx in range(len(levels) - 1, -1, -1):
        map_down = levels[idx].map_down
        part = [part[c] for c in map_down]
        part = refine(graphs[idx], part, l_max, p, cfg.refine_rounds)
    return part
