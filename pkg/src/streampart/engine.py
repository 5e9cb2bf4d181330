"""Buffered streaming partitioning: hub short-circuit, prioritized buffer,
incremental batch formation, batch-wise multilevel assignment and restreaming.

The work is split into two roles that only talk through ``PartitionTask``
objects and ``(node, block)`` commit lists:

* ``BufferHandler`` consumes the node stream, keeps the priority buffer and
  the current batch, and emits hub and batch tasks.  It never reads the
  partition state; a node counts as assigned for scoring from the moment its
  task is emitted.
* ``PartitionWorker`` owns the ``PartitionState`` and executes tasks in order.

The sequential driver runs both in lockstep; ``pipeline`` runs them
concurrently.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .batch_model import build_batch_model, commit_batch
from .bucket_pq import BucketPQ
from .fennel import FennelParams, InfeasibleError, default_params, fennel_select
from .graph import stream_nodes
from .metrics import edge_cut, ier
from .multilevel import MultilevelConfig, ml_partition
from .scoring import ScoreKind, ScoringConfig, make_scorer, max_score
from .state import PartitionState

log = logging.getLogger(__name__)

# per-node flags kept by the buffer handler
UNSEEN, BUFFERED, ASSIGNED = 0, 1, 2


@dataclass(frozen=True)
class EngineConfig:
    k: int
    epsilon: float = 0.03
    q_max: int = 1_048_576
    delta: int = 65_536
    d_max: int = 10_000
    disc_factor: float = 1000.0
    scoring: ScoringConfig = field(default_factory=ScoringConfig)
    passes: int = 1
    seed: int = 0
    parallel: bool = False
    alpha: float | None = None
    gamma: float = 1.5
    multilevel: MultilevelConfig = field(default_factory=MultilevelConfig)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        for name in ("q_max", "delta", "d_max", "passes"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not self.disc_factor > 0:
            raise ValueError("disc_factor must be > 0")
        if self.scoring.d_max != self.d_max:
            # the hub threshold doubles as the score normalizer
            object.__setattr__(
                self, "scoring",
                ScoringConfig(self.scoring.kind, self.scoring.theta, self.scoring.beta, self.scoring.eta, self.d_max),
            )


class ParsedLine(NamedTuple):
    node: int
    neighbors: list[int]
    weights: list[int]

    @property
    def degree(self) -> int:
        return len(self.neighbors)


class PartitionTask(NamedTuple):
    kind: str  # "hub" or "batch"
    seq: int
    nodes: tuple[int, ...]


@dataclass
class BatchRecord:
    pass_index: int
    index: int
    size: int
    ier: float


@dataclass
class EngineStats:
    increase_key_calls: int = 0
    extracts: int = 0
    top_moves: int = 0
    hubs: int = 0
    batches: int = 0
    peak_queue: int = 0
    peak_batch: int = 0
    peak_retained: int = 0
    capacity_violations: int = 0


class BufferHandler:
    """Owns the priority buffer and the forming batch.

    ``emit`` receives every task; with CMS scoring, commits must be fed
    back through ``apply_commits`` (possibly late).
    """

    def __init__(self, n: int, cfg: EngineConfig, emit: Callable[[PartitionTask], None]):
        self.cfg = cfg
        self.emit = emit
        self.kind = cfg.scoring.kind
        self.scorer = make_scorer(cfg.scoring)
        self.pq = BucketPQ.for_max_score(max_score(cfg.scoring), cfg.disc_factor)
        self.flag = bytearray(n)
        self.assigned = [0] * n
        self.buffered = [0] * n
        self.retained: dict[int, list[int]] = {}
        self.retained_entries = 0
        self.batch: list[int] = []
        self.seq = 0
        self.stats = EngineStats()
        self.cms = self.kind is ScoreKind.CMS
        self.nss = self.kind is ScoreKind.NSS
        if self.cms:
            self.known_block = [-1] * n
            self.per_block: dict[int, dict[int, int]] = {}
            self.top = [0] * n
            self.awaiting: dict[int, list[int]] = {}

    def _update(self, w: int) -> None:
        self.pq.increase_key(
            w,
            self.scorer(len(self.retained[w]), self.assigned[w], self.buffered[w],
                        self.top[w] if self.cms else 0),
        )

    def _mark_assigned(self, nbrs: list[int]) -> None:
        flag, assigned, buffered = self.flag, self.assigned, self.buffered
        nss = self.nss
        for w in nbrs:
            if flag[w] == BUFFERED:
                assigned[w] += 1
                if nss:
                    buffered[w] -= 1
                self._update(w)

    def push(self, v: int, nbrs: list[int], ws=None) -> None:
        cfg = self.cfg
        flag = self.flag
        if flag[v] != UNSEEN:
            raise ValueError(f"node {v} streamed twice")
        d = len(nbrs)
        if d > cfg.d_max:
            flag[v] = ASSIGNED
            self.stats.hubs += 1
            if self.cms:
                self.awaiting[v] = nbrs
            self._mark_assigned(nbrs)
            self._emit("hub", (v,))
        else:
            a = b = 0
            for u in nbrs:
                f = flag[u]
                if f == ASSIGNED:
                    a += 1
                elif f == BUFFERED:
                    b += 1
            top = 0
            if self.cms:
                counts: dict[int, int] = {}
                kb = self.known_block
                for u in nbrs:
                    blk = kb[u]
                    if blk >= 0:
                        counts[blk] = counts.get(blk, 0) + 1
                self.per_block[v] = counts
                top = max(counts.values(), default=0)
                self.top[v] = top
            self.assigned[v] = a
            self.buffered[v] = b
            flag[v] = BUFFERED
            self.retained[v] = nbrs
            self.retained_entries += d
            if self.retained_entries > self.stats.peak_retained:
                self.stats.peak_retained = self.retained_entries
            self.pq.insert(v, self.scorer(d, a, b, top))
            if len(self.pq) > self.stats.peak_queue:
                self.stats.peak_queue = len(self.pq)
            if self.nss:
                for u in nbrs:
                    if flag[u] == BUFFERED:
                        self.buffered[u] += 1
                        self._update(u)
        q_max, delta = cfg.q_max, cfg.delta
        while len(self.pq) == q_max and len(self.batch) < delta:
            self._admit()
        if len(self.batch) == delta:
            self._emit_batch()

    def _admit(self) -> None:
        u = self.pq.extract_max()
        self.flag[u] = ASSIGNED
        nbrs = self.retained.pop(u)
        self.retained_entries -= len(nbrs)
        if self.cms:
            self.per_block.pop(u, None)
            self.awaiting[u] = nbrs
        self.batch.append(u)
        if len(self.batch) > self.stats.peak_batch:
            self.stats.peak_batch = len(self.batch)
        self._mark_assigned(nbrs)

    def _emit_batch(self) -> None:
        members = tuple(self.batch)
        self.batch = []
        self.stats.batches += 1
        self._emit("batch", members)

    def _emit(self, kind: str, nodes: tuple[int, ...]) -> None:
        task = PartitionTask(kind, self.seq, nodes)
        self.seq += 1
        self.emit(task)

    def finish(self) -> None:
        """Flush the buffer into batches once the stream has ended."""
        delta = self.cfg.delta
        while len(self.pq):
            self._admit()
            if len(self.batch) == delta:
                self._emit_batch()
        if self.batch:
            self._emit_batch()
        self._collect_pq_stats()

    def _collect_pq_stats(self) -> None:
        self.stats.increase_key_calls = self.pq.increase_calls
        self.stats.extracts = self.pq.extracts
        self.stats.top_moves = self.pq.top_moves

    def apply_commits(self, commits) -> None:
        """Publish committed blocks; only CMS scores depend on them."""
        if not self.cms:
            return
        kb, flag, per_block, top = self.known_block, self.flag, self.per_block, self.top
        for v, blk in commits:
            kb[v] = blk
            nbrs = self.awaiting.pop(v, None)
            if nbrs is None:
                continue
            for w in nbrs:
                if flag[w] == BUFFERED:
                    counts = per_block[w]
                    c = counts.get(blk, 0) + 1
                    counts[blk] = c
                    if c > top[w]:
                        top[w] = c
                    self._update(w)


class PartitionWorker:
    """Owns the partition state and executes tasks in sequence order."""

    def __init__(self, g, cfg: EngineConfig, state: PartitionState | None = None):
        self.g = g
        self.cfg = cfg
        self.state = state if state is not None else PartitionState.for_graph(g, cfg.k, cfg.epsilon)
        self.params: FennelParams = default_params(g, cfg.k, self.state.l_max, cfg.alpha, cfg.gamma)
        self.records: list[BatchRecord] = []
        self.pass_index = 1
        self.last_seq = -1
        self._ml_calls = 0

    def execute(self, task: PartitionTask) -> list[tuple[int, int]]:
        if task.seq <= self.last_seq:
            raise RuntimeError(f"task {task.seq} arrived after task {self.last_seq}")
        self.last_seq = task.seq
        if task.kind == "hub":
            return [self.assign_single(task.nodes[0])]
        return self.partition_batch(list(task.nodes))

    def assign_single(self, v: int) -> tuple[int, int]:
        st = self.state
        conn = [0] * st.k
        block = st.block
        for u, w in zip(self.g.adj[v], self.g.adj_w[v]):
            b = block[u]
            if b >= 0:
                conn[b] += w
        try:
            b = fennel_select(v, conn, st.node_weights[v], st.block_weight, self.params)
        except InfeasibleError:
            return self._force(v)
        st.assign(v, b)
        return v, b

    def _force(self, v: int) -> tuple[int, int]:
        st = self.state
        b = min(range(st.k), key=lambda i: (st.block_weight[i], i))
        st.assign(v, b)
        st.forced.append(v)
        log.warning("node %d force-assigned to block %d; balance may be violated", v, b)
        return v, b

    def partition_batch(self, members: list[int]) -> list[tuple[int, int]]:
        value = ier(self.g, members).value
        rec = BatchRecord(self.pass_index, len(self.records), len(members), value)
        self.records.append(rec)
        commits = self._partition(members)
        if log.isEnabledFor(logging.DEBUG):
            log.debug("pass %d batch %d size %d ier %.4f running cut %d",
                      rec.pass_index, rec.index, rec.size, rec.ier, self._assigned_cut())
        return commits

    def _assigned_cut(self) -> int:
        """Cut weight among edges whose endpoints are both assigned."""
        xadj, adjncy, adjwgt = self.g.csr()
        part = np.asarray(self.state.block, dtype=np.int64)
        src = np.repeat(np.arange(self.g.n, dtype=np.int64), np.diff(xadj))
        a, b = part[src], part[adjncy]
        return int(adjwgt[(a >= 0) & (b >= 0) & (a != b)].sum()) // 2

    def _partition(self, members: list[int]) -> list[tuple[int, int]]:
        st = self.state
        model = build_batch_model(self.g, members, st)
        seed = self.cfg.seed * 1_000_003 + self._ml_calls
        self._ml_calls += 1
        try:
            local = ml_partition(model, st.k, st.l_max, self.params, self.cfg.multilevel, seed=seed)
        except InfeasibleError:
            if len(members) == 1:
                return [self._force(members[0])]
            half = len(members) // 2
            log.info("infeasible batch of %d nodes; retrying in halves", len(members))
            return self._partition(members[:half]) + self._partition(members[half:])
        return commit_batch(model, local, st)

    def restream(self, order) -> None:
        """One buffer-free pass: consecutive batches are removed and repartitioned."""
        self.pass_index += 1
        st = self.state
        delta = self.cfg.delta
        perm = [int(v) for v in order.perm]
        for start in range(0, len(perm), delta):
            chunk = perm[start:start + delta]
            for v in chunk:
                st.unassign(v)
            self.partition_batch(chunk)


@dataclass
class PartitionResult:
    state: PartitionState
    records: list[BatchRecord]
    stats: EngineStats
    pass_cuts: list[int] = field(default_factory=list)
    runtime_s: float = 0.0

    @property
    def ier_mean(self) -> float:
        first = [r.ier for r in self.records if r.pass_index == 1]
        return sum(first) / len(first) if first else 0.0


def run_pass_one(g, order, cfg: EngineConfig) -> tuple[PartitionState, list[BatchRecord], EngineStats]:
    worker = PartitionWorker(g, cfg)
    handler: BufferHandler

    def emit(task: PartitionTask) -> None:
        commits = worker.execute(task)
        handler.apply_commits(commits)

    handler = BufferHandler(g.n, cfg, emit)
    for v, nbrs, ws in stream_nodes(g, order):
        handler.push(v, nbrs, ws)
    handler.finish()
    return worker.state, worker.records, handler.stats


def run_restream(g, order, cfg: EngineConfig, state: PartitionState, pass_index: int = 2):
    """Buffer-free refinement pass over an existing complete partition."""
    if not state.is_complete():
        raise ValueError("restreaming needs a complete partition")
    worker = PartitionWorker(g, cfg, state)
    worker.pass_index = pass_index - 1
    worker._ml_calls = pass_index * 1_000_000
    worker.restream(order)
    return worker.state, worker.records


def partition(g, order, cfg: EngineConfig) -> PartitionResult:
    """Pass one (sequential or pipelined) followed by ``cfg.passes - 1`` restreams."""
    t0 = time.perf_counter()
    if cfg.parallel:
        from .pipeline import run_parallel

        state, records, stats = run_parallel(g, order, cfg)
    else:
        state, records, stats = run_pass_one(g, order, cfg)
    records = list(records)
    cuts = [edge_cut(g, state)[0]]
    for p in range(2, cfg.passes + 1):
        state, more = run_restream(g, order, cfg, state, pass_index=p)
        records.extend(more)
        cuts.append(edge_cut(g, state)[0])
    return PartitionResult(state, records, stats, cuts, time.perf_counter() - t0)
