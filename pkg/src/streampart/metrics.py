"""Partition quality and stream locality measures."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .state import UNASSIGNED, PartitionState


@dataclass
class MetricsReport:
    n: int
    m: int
    k: int
    epsilon: float
    cut_weight: int
    cut_ratio: float
    max_block_weight: int
    l_max: int
    balanced: bool
    aid_mean: float | None = None
    ier_mean: float | None = None
    forced_assignments: int = 0
    passes: int | None = None
    runtime_s: float | None = None

    def to_text(self) -> str:
        lines = []
        for key, val in asdict(self).items():
            if val is None:
                continue
            if isinstance(val, bool):
                val = str(val).lower()
            elif isinstance(val, float):
                val = f"{val:.6g}"
            lines.append(f"{key}={val}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    def write(self, path: str | os.PathLike) -> None:
        """JSON for ``*.json`` paths, key=value text otherwise."""
        text = self.to_json() if os.fspath(path).endswith(".json") else self.to_text()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _blocks_array(g, blocks) -> np.ndarray:
    arr = np.asarray(blocks, dtype=np.int64)
    if len(arr) != g.n:
        raise ValueError(f"assignment has {len(arr)} entries, graph has {g.n} nodes")
    if g.n and arr.min() < 0:
        raise ValueError(f"node {int(np.flatnonzero(arr < 0)[0])} is unassigned")
    return arr


def edge_cut(g, state_or_blocks) -> tuple[int, float]:
    """Return ``(cut_weight, cut_ratio)``; each undirected edge counts once."""
    blocks = getattr(state_or_blocks, "block", state_or_blocks)
    part = _blocks_array(g, blocks)
    xadj, adjncy, adjwgt = g.csr()
    src = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(xadj))
    crossing = part[src] != part[adjncy]
    cut = int(adjwgt[crossing].sum()) // 2
    total = int(adjwgt.sum()) // 2
    return cut, (cut / total if total else 0.0)


def check_balance(state: PartitionState) -> bool:
    return all(w <= state.l_max for w in state.block_weight)


def aid(g, order) -> tuple[np.ndarray, float]:
    """Per-node neighbor-to-neighbor average ID distance and its mean over all nodes.

    The consecutive gaps of sorted stream positions telescope to
    ``max - min``, so no sort is needed.  Nodes of degree <= 1 get 0.
    """
    if g.n == 0:
        return np.zeros(0), 0.0
    xadj, adjncy, _ = g.csr()
    deg = np.diff(xadj)
    pos = np.asarray(order.inverse, dtype=np.int64)[adjncy]
    vals = np.zeros(g.n, dtype=np.float64)
    # zero-degree segments are empty, so the remaining starts tile adjncy exactly
    has = deg >= 1
    if has.any():
        starts = xadj[:-1][has]
        span = np.maximum.reduceat(pos, starts) - np.minimum.reduceat(pos, starts)
        vals[has] = span / deg[has]
    return vals, float(vals.mean())


class IER(NamedTuple):
    value: float
    internal_weight: int
    incident_weight: int

    @property
    def degenerate(self) -> bool:
        """True when the batch has no incident edge weight (value reported as 0)."""
        return self.incident_weight == 0


def ier(g, batch: Iterable[int]) -> IER:
    """Fraction of a batch's incident edge weight that stays inside the batch."""
    members = set(batch)
    adj, adj_w = g.adj, g.adj_w
    inside = 0
    incident = 0
    for v in members:
        for u, w in zip(adj[v], adj_w[v]):
            incident += w
            if u in members:
                inside += w
    # ``inside`` already counts every internal edge from both ends
    return IER(inside / incident if incident else 0.0, inside // 2, incident)


def build_report(
    g,
    state: PartitionState,
    order=None,
    ier_values: Iterable[float] | None = None,
    passes: int | None = None,
    runtime_s: float | None = None,
) -> MetricsReport:
    cut, ratio = edge_cut(g, state)
    ier_list = list(ier_values) if ier_values is not None else []
    return MetricsReport(
        n=g.n,
        m=g.m,
        k=state.k,
        epsilon=state.epsilon,
        cut_weight=cut,
        cut_ratio=ratio,
        max_block_weight=state.max_block_weight(),
        l_max=state.l_max,
        balanced=check_balance(state),
        aid_mean=aid(g, order)[1] if order is not None else None,
        ier_mean=float(np.mean(ier_list)) if ier_list else None,
        forced_assignments=len(state.forced),
        passes=passes,
        runtime_s=runtime_s,
    )


def assert_complete(state: PartitionState) -> None:
    for v, b in enumerate(state.block):
        if b == UNASSIGNED:
            raise ValueError(f"node {v} is unassigned")
