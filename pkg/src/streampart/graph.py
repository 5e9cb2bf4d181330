"""METIS graph input/output and node streaming."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

SUPPORTED_FORMATS = (0, 1, 10, 11)


class MetisFormatError(ValueError):
    """Raised for malformed or inconsistent METIS input."""


@dataclass(eq=False)
class StreamGraph:
    """Undirected graph with per-node adjacency lists.

    ``adj[v]`` and ``adj_w[v]`` are parallel lists holding the neighbors of
    ``v`` and the weights of the corresponding edges.  Node IDs are 0-based.
    """

    n: int
    m: int
    node_weights: list[int]
    adj: list[list[int]]
    adj_w: list[list[int]]
    has_node_weights: bool = False
    has_edge_weights: bool = False
    _csr: tuple | None = field(default=None, repr=False)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int] | tuple[int, int, int]],
        node_weights: Sequence[int] | None = None,
    ) -> "StreamGraph":
        """Build a graph from 0-based undirected edges ``(u, v[, w])``."""
        adj: list[list[int]] = [[] for _ in range(n)]
        adj_w: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        weighted = False
        for e in edges:
            u, v = int(e[0]), int(e[1])
            w = int(e[2]) if len(e) > 2 else 1
            weighted = weighted or w != 1
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"parallel edge {key}")
            seen.add(key)
            adj[u].append(v)
            adj_w[u].append(w)
            adj[v].append(u)
            adj_w[v].append(w)
        if node_weights is None:
            nw = [1] * n
        else:
            nw = [int(c) for c in node_weights]
        g = cls(
            n=n,
            m=len(seen),
            node_weights=nw,
            adj=adj,
            adj_w=adj_w,
            has_node_weights=node_weights is not None and any(c != 1 for c in nw),
            has_edge_weights=weighted,
        )
        g.validate()
        return g

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    @property
    def total_node_weight(self) -> int:
        return sum(self.node_weights)

    @property
    def total_edge_weight(self) -> int:
        return sum(sum(ws) for ws in self.adj_w) // 2

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Each undirected edge once, as ``(u, v, w)`` with ``u < v``."""
        for u in range(self.n):
            for v, w in zip(self.adj[u], self.adj_w[u]):
                if u < v:
                    yield u, v, w

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return cached ``(xadj, adjncy, adjwgt)`` arrays."""
        if self._csr is None:
            deg = np.fromiter((len(a) for a in self.adj), dtype=np.int64, count=self.n)
            xadj = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(deg, out=xadj[1:])
            total = int(xadj[-1])
            adjncy = np.fromiter((u for a in self.adj for u in a), dtype=np.int64, count=total)
            adjwgt = np.fromiter((w for ws in self.adj_w for w in ws), dtype=np.int64, count=total)
            self._csr = (xadj, adjncy, adjwgt)
        return self._csr

    def validate(self) -> None:
        """Check symmetry, simplicity, weight signs and the edge count."""
        n = self.n
        if len(self.adj) != n or len(self.adj_w) != n or len(self.node_weights) != n:
            raise MetisFormatError("adjacency arrays do not match node count")
        total = 0
        lookup: list[dict[int, int]] = []
        for v in range(n):
            nbrs, ws = self.adj[v], self.adj_w[v]
            if len(nbrs) != len(ws):
                raise MetisFormatError(f"node {v}: neighbor/weight length mismatch")
            if self.node_weights[v] < 0:
                raise MetisFormatError(f"node {v}: negative node weight")
            d: dict[int, int] = {}
            for u, w in zip(nbrs, ws):
                if u < 0 or u >= n:
                    raise MetisFormatError(f"node {v}: neighbor {u} out of range")
                if u == v:
                    raise MetisFormatError(f"self-loop at node {v}")
                if w <= 0:
                    raise MetisFormatError(f"edge ({v}, {u}): non-positive weight {w}")
                if u in d:
                    raise MetisFormatError(f"parallel edge ({v}, {u})")
                d[u] = w
            total += len(nbrs)
            lookup.append(d)
        for v in range(n):
            for u, w in lookup[v].items():
                back = lookup[u].get(v)
                if back is None:
                    raise MetisFormatError(f"asymmetric edge ({v + 1}, {u + 1}): missing reverse direction")
                if back != w:
                    raise MetisFormatError(f"asymmetric edge ({v + 1}, {u + 1}): weights {w} != {back}")
        if total != 2 * self.m:
            raise MetisFormatError(f"header edge count {self.m} does not match adjacency ({total} half-edges)")


def _parse_header(tokens: list[str]) -> tuple[int, int, bool, bool]:
    if len(tokens) < 2:
        raise MetisFormatError("malformed header: expected 'n m [fmt [ncon]]'")
    try:
        n, m = int(tokens[0]), int(tokens[1])
        fmt = int(tokens[2]) if len(tokens) > 2 else 0
        ncon = int(tokens[3]) if len(tokens) > 3 else 1
    except ValueError as exc:
        raise MetisFormatError(f"malformed header: {' '.join(tokens)}") from exc
    if n < 0 or m < 0:
        raise MetisFormatError("malformed header: negative counts")
    if fmt not in SUPPORTED_FORMATS:
        raise MetisFormatError(f"unsupported fmt code {tokens[2]}")
    if ncon != 1 or len(tokens) > 4:
        raise MetisFormatError("multi-constraint graphs are not supported")
    return n, m, fmt in (10, 11), fmt in (1, 11)


def parse_metis(lines: Iterable[str]) -> StreamGraph:
    """Parse METIS text given as an iterable of lines."""
    it = (line for line in lines if not line.lstrip().startswith("%"))
    header = None
    for line in it:
        if line.strip():
            header = line.split()
            break
    if header is None:
        raise MetisFormatError("malformed header: empty file")
    n, m, node_w, edge_w = _parse_header(header)

    node_weights = [1] * n
    adj: list[list[int]] = []
    adj_w: list[list[int]] = []
    for line in it:
        toks = line.split()
        if len(adj) == n:
            if toks:
                raise MetisFormatError("adjacency line count mismatch: more than n lines")
            continue
        v = len(adj)
        try:
            vals = [int(t) for t in toks]
        except ValueError as exc:
            raise MetisFormatError(f"node {v + 1}: non-integer token") from exc
        if node_w:
            if not vals:
                raise MetisFormatError(f"node {v + 1}: missing node weight")
            node_weights[v] = vals[0]
            vals = vals[1:]
        if edge_w:
            if len(vals) % 2:
                raise MetisFormatError(f"node {v + 1}: odd number of neighbor/weight tokens")
            nbrs, ws = vals[0::2], vals[1::2]
        else:
            nbrs, ws = vals, [1] * len(vals)
        for u in nbrs:
            if u < 1 or u > n:
                raise MetisFormatError(f"node {v + 1}: edge endpoint {u} out of range [1, {n}]")
        adj.append([u - 1 for u in nbrs])
        adj_w.append(ws)
    if len(adj) != n:
        raise MetisFormatError(f"adjacency line count mismatch: header says {n}, found {len(adj)}")
    g = StreamGraph(n, m, node_weights, adj, adj_w, node_w, edge_w)
    g.validate()
    return g


def load_metis(path: str | os.PathLike) -> StreamGraph:
    with open(path, "r", encoding="ascii") as fh:
        return parse_metis(fh.read().splitlines())


def write_metis(g: StreamGraph, path: str | os.PathLike) -> None:
    """Write ``g`` in METIS format, keeping the weight flags of ``g``."""
    fmt = (10 if g.has_node_weights else 0) + (1 if g.has_edge_weights else 0)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {g.m}" + (f" {fmt:d}" if fmt else "") + "\n")
        for v in range(g.n):
            toks = [str(g.node_weights[v])] if g.has_node_weights else []
            for u, w in zip(g.adj[v], g.adj_w[v]):
                toks.append(str(u + 1))
                if g.has_edge_weights:
                    toks.append(str(w))
            fh.write(" ".join(toks) + "\n")


def stream_nodes(g: StreamGraph, order) -> Iterator[tuple[int, list[int], list[int]]]:
    """Yield ``(v, neighbors, edge_weights)`` for every node in stream order."""
    adj, adj_w = g.adj, g.adj_w
    for v in order.perm:
        v = int(v)
        yield v, adj[v], adj_w[v]


def write_assignment(state, path: str | os.PathLike) -> None:
    """Write one block ID per line, line ``i`` holding the block of node ``i``."""
    blocks = state.block
    for v, b in enumerate(blocks):
        if b < 0:
            raise ValueError(f"node {v} is unassigned")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("".join(f"{b}\n" for b in blocks))


def read_assignment(path: str | os.PathLike, n: int | None = None) -> list[int]:
    with open(path, "r", encoding="ascii") as fh:
        blocks = [int(line) for line in fh.read().split()]
    if n is not None and len(blocks) != n:
        raise ValueError(f"assignment has {len(blocks)} entries, graph has {n} nodes")
    return blocks
